#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "vesflex/core.hpp"

namespace vesflex::thermal {

/// First-order RC model of a cooled space.
///
///   C dθ/dt = -(θ - θa)/R + q_d - η p
///
/// Units: R in °C/kW, C in kWh/°C, p in kW (electric), q_d in kW (thermal),
/// time in hours.
struct ThermalParams {
  double r = 0.0;        ///< thermal resistance, °C/kW
  double c = 0.0;        ///< thermal capacitance, kWh/°C
  double eta_cop = 0.0;  ///< coefficient of performance
  double p_rated = 0.0;  ///< rated electric power, kW

  void validate() const;
  double time_constant() const { return r * c; }  ///< hours
  double static_gain() const { return r * eta_cop; }  ///< °C per kW
};

/// Weather and internal gains, sampled on the same grid as the power input.
class DisturbanceSeries {
 public:
  DisturbanceSeries(double dt, std::vector<double> theta_a, std::vector<double> q_d);

  static DisturbanceSeries constant(double dt, std::size_t n, double theta_a, double q_d);

  /// Reads `t_hours,theta_a_C,q_d_kW`; the time column must be uniform to 1e-9 h.
  static DisturbanceSeries from_csv(std::istream& in);
  static DisturbanceSeries from_csv_file(const std::string& path);

  double dt() const { return dt_; }
  std::size_t size() const { return theta_a_.size(); }
  const std::vector<double>& theta_a() const { return theta_a_; }
  const std::vector<double>& q_d() const { return q_d_; }
  bool is_time_invariant() const;
  DisturbanceSeries slice(std::size_t first, std::size_t count) const;

 private:
  double dt_;
  std::vector<double> theta_a_;
  std::vector<double> q_d_;
};

/// Electric power that holds `theta_sp` in steady state. Negative values mean
/// heating would be required; no clamping is applied.
double equilibrium_power(const ThermalParams& params, double theta_a0, double q_d0,
                         double theta_sp);

/// Exact zero-order-hold response. Returns N + 1 temperatures θ(0..N·dt) for
/// N power samples.
Trajectory simulate(const ThermalParams& params, double theta0, const Trajectory& p,
                    const DisturbanceSeries& dist);

/// |G(jω)| of the power-deviation to temperature-deviation transfer function,
/// with ω in rad/h.
double tf_magnitude(const ThermalParams& params, double omega);

/// Largest sinusoidal power amplitude whose steady temperature swing stays
/// within ±delta_theta. Not clamped against power limits.
double max_sine_amplitude(const ThermalParams& params, double delta_theta, double omega);

struct Baseline {
  Trajectory power;                       ///< kW, clamped to [0, p_rated]
  std::vector<double> unclamped;          ///< equilibrium power per sample
  std::vector<std::size_t> saturated_high;  ///< samples clamped at p_rated
  std::vector<std::size_t> saturated_low;   ///< samples clamped at 0
  bool saturated() const { return !saturated_high.empty() || !saturated_low.empty(); }
};

/// Quasi-steady demand holding `theta_sp` for each disturbance sample.
Baseline baseline_trajectory(const ThermalParams& params, double theta_sp,
                             const DisturbanceSeries& dist);

inline double fahrenheit_to_celsius(double f) { return (f - 32.0) * 5.0 / 9.0; }

}  // namespace vesflex::thermal
