#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "config.hpp"
#include "vesflex/battery.hpp"
#include "vesflex/csv.hpp"
#include "vesflex/deferrable.hpp"
#include "vesflex/ensemble.hpp"
#include "vesflex/flexset.hpp"
#include "vesflex/humidity.hpp"
#include "vesflex/planner.hpp"

namespace vesflex::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
  std::string config;
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "scenario config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out-dir", c.out_dir, "directory for CSV outputs");
}

std::string output(const Common& c, const std::string& file) {
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / file).string();
}

std::vector<double> number_list(const std::string& raw, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(what + ": '" + item + "' is not a number");
    }
  }
  return v;
}

std::string fmt(double v) { return v != v ? std::string("undefined") : csv::format_number(v); }

int cmd_simulate(const Common& c, const std::string& power_csv, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const auto scn = scenario_from(cfg);
  Trajectory p = scn.baseline().power;
  if (!power_csv.empty()) {
    const auto t = csv::read_file(power_csv, {"t_hours", "p_kW"});
    p = Trajectory(csv::uniform_step(t.column_values("t_hours")), t.column_values("p_kW"), "kW");
  }
  if (p.size() != scn.steps() || !same_step(p.dt(), scn.dt())) {
    throw InputError("simulate: power has " + std::to_string(p.size()) + " samples at dt " + fmt(p.dt()) +
                     " h but the disturbance has " + std::to_string(scn.steps()) + " samples at dt " +
                     fmt(scn.dt()) + " h");
  }
  const auto verdict = flexset::is_member(p, scn);
  csv::Table t;
  t.header = {"t_hours", "p_kW", "theta_C"};
  for (std::size_t k = 0; k <= p.size(); ++k) {
    t.rows.push_back({verdict.theta.time(k), k < p.size() ? p[k] : kNaN, verdict.theta[k]});
  }
  csv::write_file(output(c, "simulate.csv"), t);
  out << "member = " << (verdict.member() ? "yes" : "no") << "\n";
  if (verdict.status == flexset::MemberStatus::qos_violation) {
    out << "first_violation_h = " << fmt(verdict.violation_time()) << " (" << qos::to_string(verdict.qos.channel)
        << " " << fmt(verdict.qos.value) << " vs " << fmt(verdict.qos.bound) << ")\n";
  } else if (verdict.status == flexset::MemberStatus::power_out_of_range) {
    out << "power_out_of_range_at_h = " << fmt(p.time(verdict.power_index)) << "\n";
  }
  return 0;
}

int cmd_envelope(const Common& c, std::size_t samples, std::uint64_t seed, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const auto scn = scenario_from(cfg);
  const auto env = flexset::envelope(scn);
  const auto base = scn.baseline().power;
  csv::Table t;
  t.header = {"t_hours", "p_lo_kW", "p_hi_kW", "baseline_kW"};
  for (std::size_t k = 0; k < env.p_lo.size(); ++k) {
    t.rows.push_back({base.time(k), env.p_lo[k], env.p_hi[k], base[k]});
  }
  csv::write_file(output(c, "envelope.csv"), t);
  out << "half_width_kW = " << fmt(env.max_half_width()) << "\n";
  if (env.empty()) {
    out << "envelope empty at " << env.empty_samples.size() << " samples, first t = "
        << fmt(base.time(env.empty_samples.front())) << " h\n";
    return 1;
  }
  if (samples == 0) return 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<double> p(env.p_lo.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = env.p_lo[k] + unit(rng) * (env.p_hi[k] - env.p_lo[k]);
    if (!flexset::is_member(Trajectory(scn.dt(), std::move(p)), scn).member()) ++failures;
  }
  out << "checked " << samples << " random envelope trajectories (seed " << seed << "): " << failures
      << " infeasible\n";
  return failures == 0 ? 0 : 1;
}

int cmd_freq(const Common& c, std::optional<double> omega_cycles, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const auto scn = scenario_from(cfg);
  std::vector<double> cycles;
  if (omega_cycles) {
    cycles = {*omega_cycles};
  } else if (cfg.has("freq", "sweep_cycles_per_h")) {
    cycles = number_list(cfg.text("freq", "sweep_cycles_per_h", ""), "freq sweep_cycles_per_h");
  } else {
    cycles = {cfg.number("freq", "omega_cycles_per_h", 0.0)};
  }
  std::vector<double> omegas;
  for (double f : cycles) {
    if (!(f >= 0.0)) throw InputError("freq: frequency must be >= 0 cycles/h");
    omegas.push_back(2.0 * std::numbers::pi * f);
  }
  const auto curve = flexset::conservativeness_curve(scn, omegas);
  csv::Table t;
  t.header = {"omega_cycles_per_h", "omega_rad_per_h", "gain_C_per_kW", "a_max_unclamped_kW", "a_max_kW", "ratio",
              "ratio_unclamped"};
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& pt = curve[i];
    t.rows.push_back({cycles[i], pt.omega, thermal::tf_magnitude(scn.params, pt.omega), pt.a_max_unclamped, pt.a_max,
                      pt.ratio, pt.ratio_unclamped});
    out << "omega = " << fmt(cycles[i]) << " cycles/h: A_max = " << fmt(pt.a_max) << " kW (unclamped "
        << fmt(pt.a_max_unclamped) << " kW, ratio " << fmt(pt.ratio) << ")\n";
  }
  csv::write_file(output(c, "freq.csv"), t);
  return 0;
}

int cmd_plan(const Common& c, const std::string& ref, const std::string& norm_flag, const std::string& dump_lp,
             std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const auto scn = scenario_from(cfg);
  Trajectory r;
  if (!ref.empty()) {
    r = planner::read_reference_csv(ref);
  } else if (auto p = cfg.path("plan", "reference_csv")) {
    r = planner::read_reference_csv(p->string());
  } else {
    const auto base = scn.baseline().power;
    const double offset = cfg.number("plan", "offset_kW", 0.0);
    const double until = cfg.number("plan", "offset_until_h", std::numeric_limits<double>::infinity());
    std::vector<double> v(base.values());
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (base.time(k) < until - 1e-12) v[k] += offset;
    }
    r = Trajectory(scn.dt(), std::move(v), "kW");
  }
  const auto norm = planner::parse_norm(norm_flag.empty() ? cfg.text("plan", "norm", "two") : norm_flag);
  const auto horizon_steps = cfg.maybe("plan", "horizon_steps");
  if (horizon_steps && (*horizon_steps < 1.0 || *horizon_steps != std::floor(*horizon_steps))) {
    throw InputError("config [plan] horizon_steps must be a positive integer");
  }
  planner::PlanRequest req{scn, r, norm, horizon_steps ? static_cast<std::size_t>(*horizon_steps) : 0};
  if (!dump_lp.empty()) {
    std::ofstream f(dump_lp);
    if (!f) throw InputError("cannot write '" + dump_lp + "'");
    const std::size_t h = req.horizon == 0 ? scn.steps() : req.horizon;
    planner::tracking_lp(scn.window(0, h, scn.theta0), r, norm).dump(f);
  }
  const auto res = planner::plan(req);
  if (!res.feasible) {
    if (res.first_empty > 0) {
      out << "infeasible: temperature sample " << res.first_empty << " (t = "
          << fmt(static_cast<double>(res.first_empty) * scn.dt()) << " h) cannot be kept within bounds\n";
    } else {
      out << "solver stopped with status " << solver::to_string(res.solve.status) << " after "
          << res.solve.iterations << " iterations\n";
    }
    return 1;
  }
  planner::write_plan_csv(output(c, "plan.csv"), res);
  out << "norm = " << planner::to_string(norm) << "\n"
      << "tracking_error = " << fmt(res.error.value(norm)) << " (l1 " << fmt(res.error.l1) << " kWh, l2 "
      << fmt(res.error.l2) << ", linf " << fmt(res.error.linf) << " kW)\n"
      << "iterations = " << res.solve.iterations << "\n";
  return 0;
}

int cmd_humidity(const Common& c, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const std::string s = "humidity";
  humidity::PsychroConstants k;
  k.cp_air = cfg.number(s, "cp_air_kJ_per_kg_C", k.cp_air);
  k.cp_water_vapor = cfg.number(s, "cp_water_vapor_kJ_per_kg_C", k.cp_water_vapor);
  k.h_g = cfg.number(s, "h_g_kJ_per_kg", k.h_g);
  humidity::AhuOperatingPoint op;
  op.m_dot_sa = cfg.number(s, "m_dot_sa_kg_per_s");
  op.eta_cop_ch = cfg.number(s, "eta_cop_ch");
  const humidity::MoistAirState ret{cfg.number(s, "mixed_T_C"), cfg.number(s, "mixed_W_kg_per_kg")};
  if (cfg.has(s, "oa_fraction")) {
    const humidity::MoistAirState oa{cfg.number(s, "outdoor_T_C"), cfg.number(s, "outdoor_W_kg_per_kg")};
    op.mixed = humidity::mix_air(oa, ret, cfg.number(s, "oa_fraction"));
  } else {
    op.mixed = ret;
  }
  op.conditioned = {cfg.number(s, "conditioned_T_C"), cfg.number(s, "conditioned_W_kg_per_kg")};
  const double q = humidity::coil_thermal_power(op, k);
  const double p = humidity::electric_demand_cd(op, k);
  const auto split = humidity::latent_sensible_split(op.mixed, op.conditioned, k);
  csv::Table t;
  t.header = {"q_cd_kW", "p_cd_kW", "sensible_kJkg", "latent_kJkg", "latent_fraction"};
  t.rows.push_back({q, p, split.sensible, split.latent, split.latent_fraction.value_or(kNaN)});
  csv::write_file(output(c, "humidity.csv"), t);
  out << "q_cd_kW = " << fmt(q) << "\np_cd_kW = " << fmt(p) << "\nsensible_kJkg = " << fmt(split.sensible)
      << "\nlatent_kJkg = " << fmt(split.latent)
      << "\nlatent_fraction = " << fmt(split.latent_fraction.value_or(kNaN)) << "\n";
  return 0;
}

int cmd_deferrable(const Common& c, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const auto scn = scenario_from(cfg);
  const std::string s = "deferrable";
  deferrable::DeferrableSpec spec;
  spec.kind = deferrable::parse_kind(cfg.text(s, "kind", "battery"));
  spec.tau = cfg.number(s, "tau_h", 0.0);
  spec.window = cfg.number(s, "window_h", scn.dt() * static_cast<double>(scn.steps()) - spec.tau);
  spec.power_cap = cfg.number(s, "power_cap_kW", scn.params.p_rated);

  auto with_weather = [&](const std::string& ta, const std::string& qd) {
    flexset::Scenario day = scn;
    day.dist = thermal::DisturbanceSeries::constant(scn.dt(), scn.steps(), cfg.number(s, ta), cfg.number(s, qd));
    return day;
  };
  if (cfg.has(s, "energy_kWh")) {
    spec.energy = cfg.number(s, "energy_kWh");
  } else if (cfg.has(s, "hot_theta_a_C")) {
    spec.energy = deferrable::baseline_energy(with_weather("hot_theta_a_C", "hot_q_d_kW"), spec.tau, spec.window);
  }
  const auto day = cfg.has(s, "cold_theta_a_C") ? with_weather("cold_theta_a_C", "cold_q_d_kW") : scn;
  const auto rep = deferrable::counterexample_check(spec, day);
  const auto first = rep.first_violation();
  csv::Table t;
  t.header = {"deferrable_ok", "qos_ok", "first_violation_h", "energy_kWh", "spec_feasible"};
  t.rows.push_back({rep.deferrable_ok ? 1.0 : 0.0, rep.qos_ok ? 1.0 : 0.0, first.value_or(kNaN),
                    spec.energy.value_or(kNaN), deferrable::spec_feasible(spec) ? 1.0 : 0.0});
  csv::write_file(output(c, "deferrable.csv"), t);
  out << "energy_kWh = " << fmt(spec.energy.value_or(kNaN)) << "\n"
      << "deferrable_ok = " << (rep.deferrable_ok ? "true" : "false");
  if (!rep.deferrable_ok) out << " (" << rep.deferrable_reason << ")";
  out << "\nqos_ok = " << (rep.qos_ok ? "true" : "false") << "\n";
  if (first) out << "first_violation_h = " << fmt(*first) << "\n";
  return 0;
}

int cmd_ensemble(const Common& c, const std::string& ref_flag, std::optional<std::size_t> max_loads_flag,
                 std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const std::string s = "ensemble";
  std::string ref_path = ref_flag;
  if (ref_path.empty()) {
    auto p = cfg.path(s, "reference_csv");
    if (!p) throw InputError("ensemble: no reference (use --ref or [ensemble] reference_csv)");
    ref_path = p->string();
  }
  const auto ref = ensemble::read_reference_csv(ref_path);
  const double u = cfg.number(s, "u_kW", 1.0);
  std::size_t cap = std::numeric_limits<std::size_t>::max();
  if (max_loads_flag) {
    cap = *max_loads_flag;
  } else if (auto m = cfg.maybe(s, "max_loads")) {
    cap = static_cast<std::size_t>(*m);
  }
  int code = 0;
  const auto tr = ensemble::schedule_tracking(ref, cap, u);
  if (tr.feasible) {
    ensemble::write_schedule_csv(output(c, "schedule.csv"), tr.schedule);
    out << "loads_used = " << tr.schedule.loads_used() << "\n";
  } else {
    out << "infeasible: " << tr.reason << "\n";
    code = 1;
  }
  if (const auto rot = ensemble::min_loads_over_rotations(ref)) {
    out << "best_start_slot = " << rot->shift << " (loads " << rot->loads << ")\n";
  }
  if (const auto per = ensemble::min_loads_periodic(ref)) out << "periodic_loads = " << *per << "\n";
  if (cfg.has(s, "curve_loads")) {
    ensemble::PulseLoadSpec spec{u, 1.0, static_cast<std::size_t>(cfg.number(s, "curve_loads"))};
    std::vector<std::size_t> taus;
    for (double v : number_list(cfg.text(s, "curve_half_periods", "1,2,3,4"), "ensemble curve_half_periods")) {
      if (v < 1.0 || v != std::floor(v)) throw InputError("ensemble: half-periods must be positive integers");
      taus.push_back(static_cast<std::size_t>(v));
    }
    const auto curve =
        ensemble::amplitude_timescale_curve(spec, taus, static_cast<std::size_t>(cfg.number(s, "curve_cycles", 2)));
    csv::Table t;
    t.header = {"half_period_slots", "max_amplitude_kW"};
    for (const auto& [tau, a] : curve) t.rows.push_back({static_cast<double>(tau), a});
    csv::write_file(output(c, "amplitude_curve.csv"), t);
  }
  return code;
}

int cmd_capacity(const Common& c, std::ostream& out) {
  const auto cfg = Config::load(c.config);
  const double rate_h = cfg.number("capacity", "rate_horizon_h", 1.0);
  auto horizon_scenario = [&](std::optional<double> h) {
    if (!cfg.has("scenario", "disturbance_csv")) return scenario_from(cfg, h);
    auto full = scenario_from(cfg);
    if (!h) return full;
    const auto steps = static_cast<std::size_t>(std::llround(*h / full.dt()));
    if (steps == 0 || steps > full.steps()) throw InputError("capacity: horizon exceeds the disturbance series");
    return full.window(0, steps, full.theta0);
  };
  const auto rate_scn = horizon_scenario(rate_h);
  const auto energy_scn = horizon_scenario(cfg.maybe("capacity", "energy_horizon_h"));
  const auto caps = battery::capacities(rate_scn, energy_scn, cfg.name());
  battery::write_caps_csv(output(c, "capacity.csv"), caps);
  out << "p_c_kW = " << fmt(caps.p_c) << "\np_dc_kW = " << fmt(caps.p_dc) << "\ne_c_kWh = " << fmt(caps.e_c)
      << "\ne_dc_kWh = " << fmt(caps.e_dc) << "\nhorizon_h = " << fmt(caps.horizon) << "\nrate_horizon_h = "
      << fmt(rate_scn.dt() * static_cast<double>(rate_scn.steps())) << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Demand flexibility of thermal loads as virtual storage", "vesflex"};
  app.require_subcommand(1);

  Common c_sim, c_env, c_freq, c_plan, c_hum, c_def, c_ens, c_cap;
  std::string power_csv, plan_ref, plan_norm, dump_lp, ens_ref;
  std::size_t check_samples = 0;
  std::uint64_t seed = 1;
  std::optional<double> omega_cycles;
  std::optional<std::size_t> max_loads;

  auto* sim = app.add_subcommand("simulate", "simulate temperature for a power trajectory");
  add_common(sim, c_sim);
  sim->add_option("--power", power_csv, "power CSV t_hours,p_kW (default: baseline)")->check(CLI::ExistingFile);

  auto* env = app.add_subcommand("envelope", "quasi-steady power envelope");
  add_common(env, c_env);
  env->add_option("--check-samples", check_samples, "random envelope trajectories to verify");
  env->add_option("--seed", seed, "random seed for --check-samples");

  auto* freq = app.add_subcommand("freq", "largest feasible sinusoid amplitude against frequency");
  add_common(freq, c_freq);
  freq->add_option("--omega-cycles", omega_cycles, "single frequency in cycles/h");

  auto* pl = app.add_subcommand("plan", "closest feasible demand to a reference");
  add_common(pl, c_plan);
  pl->add_option("--ref", plan_ref, "reference CSV t_hours,r_ba_kW")->check(CLI::ExistingFile);
  pl->add_option("--norm", plan_norm, "two | one | inf");
  pl->add_option("--dump-lp", dump_lp, "write the tracking LP as text");

  auto* hum = app.add_subcommand("humidity", "coil demand and latent/sensible split");
  add_common(hum, c_hum);

  auto* def = app.add_subcommand("deferrable", "deferrable-load definition against QoS");
  add_common(def, c_def);

  auto* ens = app.add_subcommand("ensemble", "pulse-pair ensemble scheduling");
  add_common(ens, c_ens);
  ens->add_option("--ref", ens_ref, "reference CSV slot,deviation_units")->check(CLI::ExistingFile);
  ens->add_option("--max-loads", max_loads, "fleet size limit");

  auto* cap = app.add_subcommand("capacity", "battery-equivalent capacities");
  add_common(cap, c_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(c_sim, power_csv, out);
    if (*env) return cmd_envelope(c_env, check_samples, seed, out);
    if (*freq) return cmd_freq(c_freq, omega_cycles, out);
    if (*pl) return cmd_plan(c_plan, plan_ref, plan_norm, dump_lp, out);
    if (*hum) return cmd_humidity(c_hum, out);
    if (*def) return cmd_deferrable(c_def, out);
    if (*ens) return cmd_ensemble(c_ens, ens_ref, max_loads, out);
    if (*cap) return cmd_capacity(c_cap, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace vesflex::cli
