#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vesflex/flexset.hpp"
#include "vesflex/solver.hpp"

namespace vesflex::battery {

struct VirtualBatteryCaps {
  double p_c = 0.0;   ///< kW
  double p_dc = 0.0;  ///< kW
  double e_c = 0.0;   ///< kWh
  double e_dc = 0.0;  ///< kWh
  double horizon = 0.0;  ///< hours the maxima are taken over
  std::string weather;   ///< free-form label of the disturbance used
};

/// ẽ(k dt) = Σ_{j<k} (p_j - b_j) dt; N + 1 samples starting at 0.
Trajectory energy_state(const Trajectory& p, const Trajectory& baseline);

struct CapacityResult {
  double value = 0.0;
  std::size_t peak_index = 0;  ///< sample attaining the max (lowest index on ties)
  Trajectory p;                ///< maximizing demand trajectory
  std::size_t lp_solves = 0;
};

enum class Direction { charge, discharge };

struct CapacityPair {
  CapacityResult charge;
  CapacityResult discharge;
};

/// max over members p and samples k of ±(p_k - b_k). One LP per sample and
/// direction. Throws InputError when the flexibility set is empty.
CapacityPair rate_capacities(const flexset::Scenario& scn, const solver::LpOptions& opt = {});
CapacityResult rate_capacity(const flexset::Scenario& scn, Direction dir, const solver::LpOptions& opt = {});

/// max over members p and samples k of ±ẽ(k dt). A single terminal-sample
/// LP per direction when the scenario is time-invariant, starts at the
/// setpoint and has an unsaturated baseline; otherwise one LP per sample.
CapacityPair energy_capacities(const flexset::Scenario& scn, const solver::LpOptions& opt = {});
CapacityResult energy_capacity(const flexset::Scenario& scn, Direction dir, const solver::LpOptions& opt = {});

VirtualBatteryCaps capacities(const flexset::Scenario& rate_scn, const flexset::Scenario& energy_scn,
                              std::string weather = {});

/// Closed-form charging capacity for a constant scenario: full deviation
/// until θ reaches the lower bound at t1, then hold there. When the bound is
/// unreachable the pure ramp is integrated instead.
double bangbang_energy_oracle(const thermal::ThermalParams& params, double delta_theta, double p_tilde_max,
                              double horizon);

/// Time at which the full-deviation ramp reaches -delta_theta; infinite when
/// it never does.
double bangbang_switch_time(const thermal::ThermalParams& params, double delta_theta, double p_tilde_max);

void write_caps_csv(const std::string& path, const VirtualBatteryCaps& caps);

}  // namespace vesflex::battery
