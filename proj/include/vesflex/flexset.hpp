#pragma once

#include <cstddef>
#include <vector>

#include "vesflex/core.hpp"
#include "vesflex/qos.hpp"
#include "vesflex/thermal.hpp"

namespace vesflex::flexset {

/// Everything a feasibility question is asked against: the thermal model,
/// the admissible temperatures, the disturbance over the horizon, the
/// setpoint that defines the baseline, and the initial temperature.
struct Scenario {
  thermal::ThermalParams params;
  qos::QoSBounds bounds;
  thermal::DisturbanceSeries dist;
  double theta_sp = 0.0;
  double theta0 = 0.0;

  void validate() const;
  double dt() const { return dist.dt(); }
  std::size_t steps() const { return dist.size(); }
  thermal::Baseline baseline() const { return thermal::baseline_trajectory(params, theta_sp, dist); }
  /// Same scenario restricted to disturbance samples [first, first + count).
  Scenario window(std::size_t first, std::size_t count, double theta_start) const;
};

/// Constant-weather scenario with bounds theta_sp ± delta_theta.
Scenario make_time_invariant(const thermal::ThermalParams& params, double theta_a, double q_d,
                             double theta_sp, double delta_theta, double dt, std::size_t steps);

enum class MemberStatus { member, qos_violation, power_out_of_range };

struct MemberVerdict {
  MemberStatus status = MemberStatus::member;
  qos::Verdict qos;           ///< index refers to temperature samples (t = index * dt)
  std::size_t power_index = 0;  ///< first out-of-range power sample
  Trajectory theta;           ///< simulated temperature, N + 1 samples

  bool member() const { return status == MemberStatus::member; }
  double violation_time() const { return static_cast<double>(qos.index) * theta.dt(); }
};

/// Membership in the flexibility set: simulate the temperature produced by
/// `p` and test it against the scenario bounds. `tol` absorbs rounding only.
MemberVerdict is_member(const Trajectory& p, const Scenario& scn, double tol = 1e-9);

struct FlexEnvelope {
  double dt = 0.0;
  std::vector<double> p_lo;  ///< kW
  std::vector<double> p_hi;  ///< kW
  std::vector<std::size_t> empty_samples;  ///< no admissible power at these samples

  bool empty() const { return !empty_samples.empty(); }
  double max_half_width() const;
};

/// Quasi-steady envelope: p_hi holds theta_min and p_lo holds theta_max in
/// steady state, both clamped to [0, p_rated]. Any trajectory inside it is a
/// member whenever theta0 is inside the bounds. Time-varying temperature
/// bounds are not supported here.
FlexEnvelope envelope(const Scenario& scn);

struct CurvePoint {
  double omega = 0.0;            ///< rad/h
  double a_max_unclamped = 0.0;  ///< kW
  double a_max = 0.0;            ///< kW, clamped to min(p_rated - p_eq, p_eq)
  double ratio = 0.0;            ///< a_max / a_max(0)
  double ratio_unclamped = 0.0;  ///< a_max_unclamped / a_max(0)
};

/// Largest feasible sinusoid amplitude against frequency, relative to the
/// zero-frequency value that the envelope reports. Requires constant
/// disturbances; the temperature margin is the smaller side of the band.
std::vector<CurvePoint> conservativeness_curve(const Scenario& scn, const std::vector<double>& omegas);

/// Forward reachable temperature intervals under p in [0, p_rated],
/// intersected with the bounds. The flexibility set is non-empty iff every
/// interval is non-empty; `first_empty` is the first temperature sample
/// (1..N) whose interval is empty, or 0 when all are reachable. `margin`
/// shrinks the bounds at samples 1..N.
struct Reachability {
  std::vector<double> lo, hi;  ///< N + 1 intervals, entry 0 is theta0
  std::size_t first_empty = 0;
  bool feasible() const { return first_empty == 0; }
};
Reachability reachable_intervals(const Scenario& scn, double margin = 0.0);

/// baseline + amplitude * sin(omega t) sampled at the left end of each step.
Trajectory add_sinusoid(const Trajectory& baseline, double amplitude, double omega);

/// Least-squares fundamental amplitude of `x - mean` at `omega` over whole
/// periods after skipping `skip_hours`.
double sinusoid_amplitude(const Trajectory& x, double omega, double skip_hours);

}  // namespace vesflex::flexset
