#include "vesflex/flexset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vesflex::flexset {

void Scenario::validate() const {
  params.validate();
  bounds.validate();
  if (theta0 < bounds.theta_lo(0) || theta0 > bounds.theta_hi(0)) {
    throw InputError("initial temperature " + std::to_string(theta0) + " C lies outside the QoS bounds");
  }
  if (theta_sp < bounds.theta_min || theta_sp > bounds.theta_max) {
    throw InputError("setpoint " + std::to_string(theta_sp) + " C lies outside the QoS bounds");
  }
}

Scenario Scenario::window(std::size_t first, std::size_t count, double theta_start) const {
  Scenario out{params, bounds, dist.slice(first, count), theta_sp, theta_start};
  if (bounds.theta_min_t) {
    out.bounds.theta_min_t = std::vector<double>(bounds.theta_min_t->begin() + static_cast<std::ptrdiff_t>(first),
                                                 bounds.theta_min_t->begin() + static_cast<std::ptrdiff_t>(first + count + 1));
  }
  if (bounds.theta_max_t) {
    out.bounds.theta_max_t = std::vector<double>(bounds.theta_max_t->begin() + static_cast<std::ptrdiff_t>(first),
                                                 bounds.theta_max_t->begin() + static_cast<std::ptrdiff_t>(first + count + 1));
  }
  return out;
}

Scenario make_time_invariant(const thermal::ThermalParams& params, double theta_a, double q_d,
                             double theta_sp, double delta_theta, double dt, std::size_t steps) {
  qos::QoSBounds bounds;
  bounds.theta_min = theta_sp - delta_theta;
  bounds.theta_max = theta_sp + delta_theta;
  return {params, bounds, thermal::DisturbanceSeries::constant(dt, steps, theta_a, q_d), theta_sp, theta_sp};
}

MemberVerdict is_member(const Trajectory& p, const Scenario& scn, double tol) {
  scn.validate();
  if (!same_step(p.dt(), scn.dt()) || p.size() != scn.steps()) {
    throw InputError("is_member: power has " + std::to_string(p.size()) + " samples at dt " +
                     std::to_string(p.dt()) + " h, scenario has " + std::to_string(scn.steps()) +
                     " samples at dt " + std::to_string(scn.dt()) + " h");
  }
  MemberVerdict out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < -tol || p[k] > scn.params.p_rated + tol) {
      out.status = MemberStatus::power_out_of_range;
      out.power_index = k;
      return out;
    }
  }
  out.theta = thermal::simulate(scn.params, scn.theta0, p, scn.dist);
  out.qos = qos::satisfies(qos::QoSSignal{out.theta, std::nullopt, std::nullopt}, scn.bounds, tol);
  if (!out.qos.feasible) out.status = MemberStatus::qos_violation;
  return out;
}

double FlexEnvelope::max_half_width() const {
  double w = 0.0;
  for (std::size_t k = 0; k < p_lo.size(); ++k) w = std::max(w, 0.5 * (p_hi[k] - p_lo[k]));
  return w;
}

FlexEnvelope envelope(const Scenario& scn) {
  scn.validate();
  if (scn.bounds.theta_min_t || scn.bounds.theta_max_t) {
    throw InputError("envelope: time-varying temperature bounds are not supported");
  }
  FlexEnvelope env;
  env.dt = scn.dt();
  const auto n = scn.steps();
  env.p_lo.resize(n);
  env.p_hi.resize(n);
  const double rated = scn.params.p_rated;
  for (std::size_t k = 0; k < n; ++k) {
    const double ta = scn.dist.theta_a()[k];
    const double qd = scn.dist.q_d()[k];
    const double hi = thermal::equilibrium_power(scn.params, ta, qd, scn.bounds.theta_min);
    const double lo = thermal::equilibrium_power(scn.params, ta, qd, scn.bounds.theta_max);
    if (lo > rated || hi < 0.0) {
      // Either even full power cannot hold theta_max or zero power still
      // drives the space below theta_min.
      env.empty_samples.push_back(k);
      const double v = lo > rated ? rated : 0.0;
      env.p_lo[k] = v;
      env.p_hi[k] = v;
      continue;
    }
    env.p_lo[k] = std::clamp(lo, 0.0, rated);
    env.p_hi[k] = std::clamp(hi, 0.0, rated);
  }
  return env;
}

std::vector<CurvePoint> conservativeness_curve(const Scenario& scn, const std::vector<double>& omegas) {
  scn.validate();
  if (!scn.dist.is_time_invariant()) {
    throw InputError("conservativeness_curve requires constant disturbances");
  }
  const double delta = std::min(scn.bounds.theta_max - scn.theta_sp, scn.theta_sp - scn.bounds.theta_min);
  const double p_eq = thermal::equilibrium_power(scn.params, scn.dist.theta_a()[0], scn.dist.q_d()[0], scn.theta_sp);
  const double headroom = std::max(0.0, std::min(scn.params.p_rated - p_eq, p_eq));
  const double a0 = thermal::max_sine_amplitude(scn.params, delta, 0.0);
  std::vector<CurvePoint> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    CurvePoint pt;
    pt.omega = w;
    pt.a_max_unclamped = thermal::max_sine_amplitude(scn.params, delta, w);
    pt.a_max = std::min(pt.a_max_unclamped, headroom);
    pt.ratio = a0 > 0.0 ? pt.a_max / std::min(a0, headroom) : 0.0;
    pt.ratio_unclamped = a0 > 0.0 ? pt.a_max_unclamped / a0 : 0.0;
    out.push_back(pt);
  }
  return out;
}

Reachability reachable_intervals(const Scenario& scn, double margin) {
  scn.validate();
  const auto n = scn.steps();
  const double a = std::exp(-scn.dt() / scn.params.time_constant());
  Reachability out;
  out.lo.assign(n + 1, 0.0);
  out.hi.assign(n + 1, 0.0);
  out.lo[0] = out.hi[0] = scn.theta0;
  for (std::size_t k = 0; k < n; ++k) {
    const double free = scn.dist.theta_a()[k] + scn.params.r * scn.dist.q_d()[k];
    const double coldest = free - scn.params.static_gain() * scn.params.p_rated;
    const double lo = coldest + a * (out.lo[k] - coldest);
    const double hi = free + a * (out.hi[k] - free);
    out.lo[k + 1] = std::max(lo, scn.bounds.theta_lo(k + 1) + margin);
    out.hi[k + 1] = std::min(hi, scn.bounds.theta_hi(k + 1) - margin);
    if (out.lo[k + 1] > out.hi[k + 1]) {
      out.first_empty = k + 1;
      return out;
    }
  }
  return out;
}

Trajectory add_sinusoid(const Trajectory& baseline, double amplitude, double omega) {
  std::vector<double> v(baseline.values());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += amplitude * std::sin(omega * baseline.time(k));
  return Trajectory(baseline.dt(), std::move(v), baseline.unit());
}

double sinusoid_amplitude(const Trajectory& x, double omega, double skip_hours) {
  if (!(omega > 0.0)) throw InputError("sinusoid_amplitude: omega must be positive");
  const double period = 2.0 * std::numbers::pi / omega;
  const auto first = static_cast<std::size_t>(std::ceil(skip_hours / x.dt()));
  const double available = static_cast<double>(x.size() - std::min(first, x.size())) * x.dt();
  const double periods = std::floor(available / period);
  if (periods < 1.0) throw InputError("sinusoid_amplitude: less than one full period after the skip");
  const auto count = static_cast<std::size_t>(std::llround(periods * period / x.dt()));
  double mean = 0.0;
  for (std::size_t k = first; k < first + count; ++k) mean += x[k];
  mean /= static_cast<double>(count);
  double sc = 0.0, ss = 0.0, cc = 0.0, xs = 0.0, xc = 0.0;
  for (std::size_t k = first; k < first + count; ++k) {
    const double s = std::sin(omega * x.time(k));
    const double c = std::cos(omega * x.time(k));
    const double d = x[k] - mean;
    ss += s * s;
    cc += c * c;
    sc += s * c;
    xs += d * s;
    xc += d * c;
  }
  // 2x2 normal equations for d ≈ a sin + b cos.
  const double det = ss * cc - sc * sc;
  const double a = (xs * cc - xc * sc) / det;
  const double b = (xc * ss - xs * sc) / det;
  return std::hypot(a, b);
}

}  // namespace vesflex::flexset
