#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace vesflex::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"scenario",
       {"R_C_per_kW", "C_kWh_per_C", "eta_cop", "p_rated_kW", "p_tilde_max_kW", "theta_sp_C", "delta_theta_C",
        "theta_min_C", "theta_max_C", "theta0_C", "dt_h", "steps_per_hour", "horizon_h", "theta_a_C", "q_d_kW",
        "disturbance_csv"}},
      {"freq", {"omega_cycles_per_h", "sweep_cycles_per_h", "amplitude_kW", "sim_steps_per_hour", "sim_hours"}},
      {"plan", {"reference_csv", "norm", "horizon_steps", "offset_kW", "offset_until_h"}},
      {"humidity",
       {"m_dot_sa_kg_per_s", "eta_cop_ch", "mixed_T_C", "mixed_W_kg_per_kg", "conditioned_T_C",
        "conditioned_W_kg_per_kg", "outdoor_T_C", "outdoor_W_kg_per_kg", "oa_fraction", "cp_air_kJ_per_kg_C",
        "cp_water_vapor_kJ_per_kg_C", "h_g_kJ_per_kg"}},
      {"deferrable",
       {"kind", "tau_h", "window_h", "power_cap_kW", "energy_kWh", "hot_theta_a_C", "hot_q_d_kW", "cold_theta_a_C",
        "cold_q_d_kW"}},
      {"ensemble", {"reference_csv", "u_kW", "max_loads", "curve_loads", "curve_half_periods", "curve_cycles"}},
      {"capacity", {"rate_horizon_h", "energy_horizon_h"}},
  };
  return s;
}

double to_number(const std::string& section, const std::string& key, const std::string& raw) {
  double v = 0.0;
  const char* b = raw.data();
  const char* e = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
    throw InputError("config [" + section + "] " + key + ": '" + raw + "' is not a finite number");
  }
  return v;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  cfg.name_ = path.stem().string();
  return cfg;
}

Config Config::parse(const std::string& text, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InputError("config: " + std::string(e.what()));
  }
  Config cfg;
  cfg.base_ = base_dir;
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) throw InputError("config: unknown section [" + section + "]");
    if (!body.data().empty()) throw InputError("config: key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw InputError("config [" + section + "]: unknown key '" + key + "'");
      cfg.values_[section][key] = value.data();
    }
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = values_.find(section);
  return s != values_.end() && s->second.count(key);
}

double Config::number(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw InputError("config [" + section + "]: missing key '" + key + "'");
  return to_number(section, key, values_.at(section).at(key));
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

std::optional<double> Config::maybe(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return number(section, key);
}

std::string Config::text(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? values_.at(section).at(key) : fallback;
}

std::optional<std::filesystem::path> Config::path(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  std::filesystem::path p = values_.at(section).at(key);
  if (p.is_relative()) p = base_ / p;
  if (!std::filesystem::exists(p)) {
    throw InputError("config [" + section + "] " + key + ": file '" + p.string() + "' does not exist");
  }
  return p;
}

flexset::Scenario scenario_from(const Config& cfg, std::optional<double> horizon_override_h) {
  const std::string s = "scenario";
  thermal::ThermalParams params{cfg.number(s, "R_C_per_kW"), cfg.number(s, "C_kWh_per_C"), cfg.number(s, "eta_cop"),
                                0.0};
  const double theta_sp = cfg.number(s, "theta_sp_C");

  std::optional<thermal::DisturbanceSeries> dist;
  if (auto p = cfg.path(s, "disturbance_csv")) {
    if (cfg.has(s, "theta_a_C") || cfg.has(s, "q_d_kW") || cfg.has(s, "dt_h") || cfg.has(s, "steps_per_hour")) {
      throw InputError("config [scenario]: disturbance_csv excludes theta_a_C, q_d_kW, dt_h and steps_per_hour");
    }
    dist = thermal::DisturbanceSeries::from_csv_file(p->string());
  } else {
    double dt = 0.0;
    if (cfg.has(s, "dt_h") == cfg.has(s, "steps_per_hour")) {
      throw InputError("config [scenario]: give exactly one of dt_h and steps_per_hour");
    }
    dt = cfg.has(s, "dt_h") ? cfg.number(s, "dt_h") : 1.0 / cfg.number(s, "steps_per_hour");
    if (!(dt > 0.0)) throw InputError("config [scenario]: time step must be positive");
    const double horizon = horizon_override_h.value_or(cfg.number(s, "horizon_h"));
    const double steps = std::round(horizon / dt);
    if (!(steps >= 1.0) || std::abs(steps * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
      throw InputError("config [scenario]: horizon " + std::to_string(horizon) + " h is not a positive multiple of dt");
    }
    dist = thermal::DisturbanceSeries::constant(dt, static_cast<std::size_t>(steps), cfg.number(s, "theta_a_C"),
                                                cfg.number(s, "q_d_kW"));
  }

  const bool has_rated = cfg.has(s, "p_rated_kW");
  if (has_rated == cfg.has(s, "p_tilde_max_kW")) {
    throw InputError("config [scenario]: give exactly one of p_rated_kW and p_tilde_max_kW");
  }
  if (has_rated) {
    params.p_rated = cfg.number(s, "p_rated_kW");
  } else {
    // Rated power sits p_tilde_max above the largest equilibrium demand.
    double peak = 0.0;
    params.p_rated = 1.0;
    for (std::size_t k = 0; k < dist->size(); ++k) {
      peak = std::max(peak, thermal::equilibrium_power(params, dist->theta_a()[k], dist->q_d()[k], theta_sp));
    }
    params.p_rated = peak + cfg.number(s, "p_tilde_max_kW");
  }

  qos::QoSBounds bounds;
  if (cfg.has(s, "delta_theta_C")) {
    if (cfg.has(s, "theta_min_C") || cfg.has(s, "theta_max_C")) {
      throw InputError("config [scenario]: delta_theta_C excludes theta_min_C/theta_max_C");
    }
    const double d = cfg.number(s, "delta_theta_C");
    bounds.theta_min = theta_sp - d;
    bounds.theta_max = theta_sp + d;
  } else {
    bounds.theta_min = cfg.number(s, "theta_min_C");
    bounds.theta_max = cfg.number(s, "theta_max_C");
  }
  flexset::Scenario scn{params, bounds, *dist, theta_sp, cfg.number(s, "theta0_C", theta_sp)};
  scn.validate();
  return scn;
}

}  // namespace vesflex::cli
