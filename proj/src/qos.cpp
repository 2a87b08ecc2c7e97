#include "vesflex/qos.hpp"

#include <cmath>
#include <string>

namespace vesflex::qos {

void QoSBounds::validate() const {
  // A zero-width band is allowed: it pins the temperature.
  if (!(theta_min <= theta_max)) throw InputError("QoS bounds need theta_min <= theta_max");
  if (w_min.has_value() != w_max.has_value()) {
    throw InputError("humidity bounds need both w_min and w_max");
  }
  if (w_min && !(*w_min < *w_max)) throw InputError("QoS bounds need w_min < w_max");
  if (tau_lock && !(*tau_lock > 0.0)) throw InputError("tau_lock must be positive");
  if (theta_min_t && theta_max_t) {
    if (theta_min_t->size() != theta_max_t->size()) {
      throw InputError("time-varying temperature bounds differ in length");
    }
    for (std::size_t k = 0; k < theta_min_t->size(); ++k) {
      if (!((*theta_min_t)[k] <= (*theta_max_t)[k])) {
        throw InputError("time-varying bounds need theta_min <= theta_max at sample " +
                         std::to_string(k));
      }
    }
  }
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::none: return "none";
    case Channel::temperature: return "temperature";
    case Channel::humidity: return "humidity";
    case Channel::lockout: return "lockout";
  }
  return "unknown";
}

Trajectory lockout_count(const Trajectory& on_off, double tau_lock, std::optional<double> initial_state) {
  for (std::size_t k = 0; k < on_off.size(); ++k) {
    if (on_off[k] != 0.0 && on_off[k] != 1.0) {
      throw InputError("lockout_count: sample " + std::to_string(k) + " is not 0 or 1");
    }
  }
  if (initial_state && *initial_state != 0.0 && *initial_state != 1.0) {
    throw InputError("lockout_count: initial state is not 0 or 1");
  }
  if (!(tau_lock >= on_off.dt() * (1.0 - 1e-12))) {
    throw InputError("lockout_count: tau_lock must be at least one step");
  }
  std::vector<std::size_t> events;
  for (std::size_t k = 0; k < on_off.size(); ++k) {
    const bool switched = k == 0 ? (initial_state && *initial_state != on_off[0])
                                 : on_off[k] != on_off[k - 1];
    if (switched) events.push_back(k);
  }
  // An event at sample e is inside the window at sample k iff (k - e)·dt < tau_lock.
  const double window = tau_lock / on_off.dt();
  std::vector<double> s(on_off.size(), 0.0);
  std::size_t oldest = 0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < on_off.size(); ++k) {
    while (next < events.size() && events[next] <= k) ++next;
    while (oldest < next && static_cast<double>(k - events[oldest]) >= window - 1e-9) ++oldest;
    s[k] = static_cast<double>(next - oldest);
  }
  return Trajectory(on_off.dt(), std::move(s), "count");
}

namespace {

void check_channel(const Trajectory& x, std::size_t length, const char* name) {
  if (x.size() != length) {
    throw InputError(std::string("QoS signal channel '") + name + "' has " +
                     std::to_string(x.size()) + " samples, temperature has " +
                     std::to_string(length));
  }
}

}  // namespace

Verdict satisfies(const QoSSignal& q, const QoSBounds& bounds, double tol) {
  bounds.validate();
  const std::size_t n = q.theta.size();
  if (bounds.theta_min_t && bounds.theta_min_t->size() != n) {
    throw InputError("time-varying theta_min has " + std::to_string(bounds.theta_min_t->size()) +
                     " samples, signal has " + std::to_string(n));
  }
  if (bounds.theta_max_t && bounds.theta_max_t->size() != n) {
    throw InputError("time-varying theta_max has " + std::to_string(bounds.theta_max_t->size()) +
                     " samples, signal has " + std::to_string(n));
  }
  if (bounds.has_humidity()) {
    if (!q.w) throw InputError("humidity bounds configured but signal has no humidity channel");
    check_channel(*q.w, n, "w");
  }
  if (bounds.tau_lock) {
    if (!q.s) throw InputError("lockout configured but signal has no lockout channel");
    check_channel(*q.s, n, "s");
  }

  // Scan by sample so the first reported violation has the minimal index;
  // ties go to temperature, then humidity, then lockout.
  for (std::size_t k = 0; k < n; ++k) {
    const double th = q.theta[k];
    if (th < bounds.theta_lo(k) - tol) return {false, k, Channel::temperature, th, bounds.theta_lo(k)};
    if (th > bounds.theta_hi(k) + tol) return {false, k, Channel::temperature, th, bounds.theta_hi(k)};
    if (bounds.has_humidity()) {
      const double w = (*q.w)[k];
      if (w < *bounds.w_min - tol) return {false, k, Channel::humidity, w, *bounds.w_min};
      if (w > *bounds.w_max + tol) return {false, k, Channel::humidity, w, *bounds.w_max};
    }
    if (bounds.tau_lock) {
      const double s = (*q.s)[k];
      if (s < 0.0 || s > 1.0) return {false, k, Channel::lockout, s, s < 0.0 ? 0.0 : 1.0};
    }
  }
  return {};
}

}  // namespace vesflex::qos
