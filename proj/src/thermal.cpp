#include "vesflex/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vesflex/csv.hpp"

namespace vesflex::thermal {

void ThermalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(std::string("thermal parameter ") + name + " must be positive");
    }
  };
  positive(r, "R");
  positive(c, "C");
  positive(eta_cop, "eta_cop");
  positive(p_rated, "p_rated");
}

DisturbanceSeries::DisturbanceSeries(double dt, std::vector<double> theta_a, std::vector<double> q_d)
    : dt_(dt), theta_a_(std::move(theta_a)), q_d_(std::move(q_d)) {
  if (!(dt_ > 0.0)) throw InputError("disturbance step must be positive");
  if (theta_a_.size() != q_d_.size()) {
    throw InputError("disturbance arrays differ in length: theta_a has " +
                     std::to_string(theta_a_.size()) + " samples, q_d has " +
                     std::to_string(q_d_.size()));
  }
  if (theta_a_.empty()) throw InputError("disturbance series is empty");
  for (std::size_t k = 0; k < theta_a_.size(); ++k) {
    if (!std::isfinite(theta_a_[k]) || !std::isfinite(q_d_[k])) {
      throw InputError("disturbance sample " + std::to_string(k) + " is not finite");
    }
  }
}

DisturbanceSeries DisturbanceSeries::constant(double dt, std::size_t n, double theta_a, double q_d) {
  return {dt, std::vector<double>(n, theta_a), std::vector<double>(n, q_d)};
}

DisturbanceSeries DisturbanceSeries::from_csv(std::istream& in) {
  auto table = csv::read(in, {"t_hours", "theta_a_C", "q_d_kW"});
  auto t = table.column_values("t_hours");
  const double dt = csv::uniform_step(t);
  return {dt, table.column_values("theta_a_C"), table.column_values("q_d_kW")};
}

DisturbanceSeries DisturbanceSeries::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open disturbance file '" + path + "'");
  try {
    return from_csv(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

bool DisturbanceSeries::is_time_invariant() const {
  return std::all_of(theta_a_.begin(), theta_a_.end(), [&](double v) { return v == theta_a_[0]; }) &&
         std::all_of(q_d_.begin(), q_d_.end(), [&](double v) { return v == q_d_[0]; });
}

DisturbanceSeries DisturbanceSeries::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) {
    throw InputError("disturbance slice exceeds series length " + std::to_string(size()));
  }
  auto cut = [&](const std::vector<double>& v) {
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first),
                               v.begin() + static_cast<std::ptrdiff_t>(first + count));
  };
  return {dt_, cut(theta_a_), cut(q_d_)};
}

double equilibrium_power(const ThermalParams& params, double theta_a0, double q_d0, double theta_sp) {
  params.validate();
  return (q_d0 + (theta_a0 - theta_sp) / params.r) / params.eta_cop;
}

Trajectory simulate(const ThermalParams& params, double theta0, const Trajectory& p,
                    const DisturbanceSeries& dist) {
  params.validate();
  if (!same_step(p.dt(), dist.dt()) || p.size() != dist.size()) {
    throw InputError("simulate: power has " + std::to_string(p.size()) + " samples at dt " +
                     std::to_string(p.dt()) + " h but disturbance has " +
                     std::to_string(dist.size()) + " samples at dt " + std::to_string(dist.dt()) +
                     " h");
  }
  const double a = std::exp(-p.dt() / params.time_constant());
  std::vector<double> theta(p.size() + 1);
  theta[0] = theta0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    // steady-state temperature under the inputs held over step k
    const double target = dist.theta_a()[k] + params.r * (dist.q_d()[k] - params.eta_cop * p[k]);
    theta[k + 1] = target + a * (theta[k] - target);
  }
  return Trajectory(p.dt(), std::move(theta), "C");
}

double tf_magnitude(const ThermalParams& params, double omega) {
  params.validate();
  if (!(omega >= 0.0)) throw InputError("tf_magnitude: omega must be non-negative");
  const double pole = 1.0 / params.time_constant();
  return (params.eta_cop / params.c) / std::hypot(omega, pole);
}

double max_sine_amplitude(const ThermalParams& params, double delta_theta, double omega) {
  if (!(delta_theta >= 0.0)) throw InputError("max_sine_amplitude: delta_theta must be >= 0");
  return delta_theta / tf_magnitude(params, omega);
}

Baseline baseline_trajectory(const ThermalParams& params, double theta_sp,
                             const DisturbanceSeries& dist) {
  params.validate();
  Baseline out;
  std::vector<double> p(dist.size());
  out.unclamped.resize(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double eq = equilibrium_power(params, dist.theta_a()[k], dist.q_d()[k], theta_sp);
    out.unclamped[k] = eq;
    if (eq > params.p_rated) {
      out.saturated_high.push_back(k);
    } else if (eq < 0.0) {
      out.saturated_low.push_back(k);
    }
    p[k] = std::clamp(eq, 0.0, params.p_rated);
  }
  out.power = Trajectory(dist.dt(), std::move(p), "kW");
  return out;
}

}  // namespace vesflex::thermal
