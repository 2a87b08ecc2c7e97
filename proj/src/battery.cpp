#include "vesflex/battery.hpp"

#include <cmath>
#include <limits>

#include "vesflex/csv.hpp"
#include "vesflex/discrete.hpp"

namespace vesflex::battery {

Trajectory energy_state(const Trajectory& p, const Trajectory& baseline) {
  require_same_shape(p, baseline, "energy_state");
  std::vector<double> e(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) e[k + 1] = e[k] + (p[k] - baseline[k]) * p.dt();
  return Trajectory(p.dt(), std::move(e), "kWh");
}

namespace {

enum class Objective { rate, energy };

// Maximizes sign * (p_k - b_k) for the rate case, or sign * ẽ((k + 1) dt)
// for the energy case.
CapacityResult solve_one(const flexset::Scenario& scn, const discrete::Dynamics& dyn, const Trajectory& base,
                         Objective what, double sign, std::size_t k, const solver::LpOptions& opt) {
  solver::LinearProgram lp(solver::LinearProgram::Sense::maximize);
  discrete::add_to(lp, dyn);
  double offset = 0.0;
  if (what == Objective::rate) {
    lp.set_cost(dyn.layout.p(k), sign);
    offset = -sign * base[k];
  } else {
    for (std::size_t j = 0; j <= k; ++j) {
      lp.set_cost(dyn.layout.p(j), sign * scn.dt());
      offset -= sign * base[j] * scn.dt();
    }
  }
  const auto rep = solver::solve_lp(lp, opt);
  if (!rep.optimal()) {
    throw InputError("capacity LP at sample " + std::to_string(k) + " ended with status " +
                     std::string(solver::to_string(rep.status)));
  }
  CapacityResult r;
  r.value = rep.objective + offset;
  r.peak_index = what == Objective::rate ? k : k + 1;
  r.p = discrete::extract_power(*rep.solution, dyn.layout, scn);
  r.lp_solves = 1;
  return r;
}

CapacityResult sweep(const flexset::Scenario& scn, Objective what, double sign, bool terminal_only,
                     const solver::LpOptions& opt) {
  const auto dyn = discrete::build(scn);
  const auto base = scn.baseline().power;
  const auto n = scn.steps();
  CapacityResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::size_t solves = 0;
  for (std::size_t k = terminal_only ? n - 1 : 0; k < n; ++k) {
    auto r = solve_one(scn, dyn, base, what, sign, k, opt);
    ++solves;
    if (r.value > best.value + opt.tol) best = std::move(r);
  }
  best.lp_solves = solves;
  if (what == Objective::energy && best.value < 0.0) {
    // ẽ(0) = 0 is always attainable.
    best.value = 0.0;
    best.peak_index = 0;
  }
  return best;
}

void require_nonempty(const flexset::Scenario& scn) {
  const auto reach = flexset::reachable_intervals(scn);
  if (!reach.feasible()) {
    throw InputError("flexibility set is empty: temperature sample " + std::to_string(reach.first_empty) +
                     " cannot be kept within bounds");
  }
}

}  // namespace

CapacityResult rate_capacity(const flexset::Scenario& scn, Direction dir, const solver::LpOptions& opt) {
  require_nonempty(scn);
  return sweep(scn, Objective::rate, dir == Direction::charge ? 1.0 : -1.0, false, opt);
}

CapacityResult energy_capacity(const flexset::Scenario& scn, Direction dir, const solver::LpOptions& opt) {
  require_nonempty(scn);
  const bool monotone = scn.dist.is_time_invariant() && scn.theta0 == scn.theta_sp &&
                        !scn.baseline().saturated() && !scn.bounds.theta_min_t && !scn.bounds.theta_max_t;
  return sweep(scn, Objective::energy, dir == Direction::charge ? 1.0 : -1.0, monotone, opt);
}

CapacityPair rate_capacities(const flexset::Scenario& scn, const solver::LpOptions& opt) {
  return {rate_capacity(scn, Direction::charge, opt), rate_capacity(scn, Direction::discharge, opt)};
}

CapacityPair energy_capacities(const flexset::Scenario& scn, const solver::LpOptions& opt) {
  return {energy_capacity(scn, Direction::charge, opt), energy_capacity(scn, Direction::discharge, opt)};
}

VirtualBatteryCaps capacities(const flexset::Scenario& rate_scn, const flexset::Scenario& energy_scn,
                              std::string weather) {
  const auto rate = rate_capacities(rate_scn);
  const auto energy = energy_capacities(energy_scn);
  VirtualBatteryCaps caps;
  caps.p_c = rate.charge.value;
  caps.p_dc = rate.discharge.value;
  caps.e_c = energy.charge.value;
  caps.e_dc = energy.discharge.value;
  caps.horizon = energy_scn.dt() * static_cast<double>(energy_scn.steps());
  caps.weather = std::move(weather);
  return caps;
}

double bangbang_switch_time(const thermal::ThermalParams& params, double delta_theta, double p_tilde_max) {
  params.validate();
  if (delta_theta < 0.0 || p_tilde_max < 0.0) throw InputError("oracle: delta_theta and p_tilde_max must be >= 0");
  const double reach = params.static_gain() * p_tilde_max;
  if (delta_theta >= reach) return std::numeric_limits<double>::infinity();
  return params.time_constant() * std::log(reach / (reach - delta_theta));
}

double bangbang_energy_oracle(const thermal::ThermalParams& params, double delta_theta, double p_tilde_max,
                              double horizon) {
  if (horizon < 0.0) throw InputError("oracle: horizon must be >= 0");
  const double t1 = bangbang_switch_time(params, delta_theta, p_tilde_max);
  if (horizon <= t1) return p_tilde_max * horizon;
  return p_tilde_max * t1 + delta_theta / params.static_gain() * (horizon - t1);
}

void write_caps_csv(const std::string& path, const VirtualBatteryCaps& caps) {
  csv::Table t;
  t.header = {"p_c_kW", "p_dc_kW", "e_c_kWh", "e_dc_kWh", "horizon_h"};
  t.rows.push_back({caps.p_c, caps.p_dc, caps.e_c, caps.e_dc, caps.horizon});
  csv::write_file(path, t);
}

}  // namespace vesflex::battery
