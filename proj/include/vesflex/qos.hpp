#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "vesflex/core.hpp"

namespace vesflex::qos {

/// Admissible set Q(t). All intervals are closed and may have zero width. Optional channels that are
/// absent impose no constraint.
struct QoSBounds {
  double theta_min = 0.0;  ///< °C
  double theta_max = 0.0;  ///< °C
  std::optional<double> w_min;  ///< kg/kg
  std::optional<double> w_max;  ///< kg/kg
  std::optional<double> tau_lock;  ///< hours; enables the lockout channel
  /// Per-sample overrides of the temperature interval; must match the signal length.
  std::optional<std::vector<double>> theta_min_t;
  std::optional<std::vector<double>> theta_max_t;

  void validate() const;
  bool has_humidity() const { return w_min.has_value() || w_max.has_value(); }
  double theta_lo(std::size_t k) const { return theta_min_t ? (*theta_min_t)[k] : theta_min; }
  double theta_hi(std::size_t k) const { return theta_max_t ? (*theta_max_t)[k] : theta_max; }
};

struct QoSSignal {
  Trajectory theta;             ///< °C
  std::optional<Trajectory> w;  ///< kg/kg
  std::optional<Trajectory> s;  ///< lockout switch count
};

enum class Channel { none, temperature, humidity, lockout };

std::string_view to_string(Channel c);

struct Verdict {
  bool feasible = true;
  std::size_t index = 0;  ///< first violating sample when infeasible
  Channel channel = Channel::none;
  double value = 0.0;  ///< offending sample value
  double bound = 0.0;  ///< the bound it crossed

  explicit operator bool() const { return feasible; }
};

/// Number of on/off switch events in the half-open window (t - tau_lock, t].
/// A switch is a change between consecutive samples and is stamped at the
/// later sample. `initial_state` is the command just before sample 0; when
/// given and different from sample 0, a switch is stamped at t = 0.
Trajectory lockout_count(const Trajectory& on_off, double tau_lock,
                         std::optional<double> initial_state = std::nullopt);

/// Membership q(t) ∈ Q(t) for every sample. `tol` widens every interval
/// symmetrically and exists only to absorb floating-point rounding.
Verdict satisfies(const QoSSignal& q, const QoSBounds& bounds, double tol = 0.0);

}  // namespace vesflex::qos
