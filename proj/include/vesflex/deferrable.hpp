#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "vesflex/flexset.hpp"

namespace vesflex::deferrable {

enum class Kind { battery, bucket, bakery };

std::string_view to_string(Kind k);
Kind parse_kind(std::string_view s);

inline constexpr double kEnergyTol = 1e-6;  ///< kWh

/// Arrival tau (h), energy E (kWh), window T (h), power cap P (kW). Buckets
/// carry no terminal energy; they may carry a running energy band instead.
struct DeferrableSpec {
  double tau = 0.0;
  std::optional<double> energy;
  double window = 0.0;
  double power_cap = 0.0;
  Kind kind = Kind::battery;
  std::optional<double> band_lo;  ///< bucket only: energy owed by the end of the window, kWh
  std::optional<double> band_hi;  ///< bucket only: cap on the running energy, kWh

  void validate() const;
};

bool spec_feasible(const DeferrableSpec& spec);

/// Length of the shortest single run at full power, E / P hours.
double bakery_run_length(const DeferrableSpec& spec);

struct Check {
  bool ok = true;
  std::string reason;  ///< empty when ok
  explicit operator bool() const { return ok; }
};

/// p starts at t = 0. tau and T must fall on sample boundaries and the
/// window must fit inside p; otherwise InputError.
Check check_trajectory(const DeferrableSpec& spec, const Trajectory& p);
inline bool trajectory_satisfies(const DeferrableSpec& spec, const Trajectory& p) {
  return check_trajectory(spec, p).ok;
}

/// Zero before tau, P until E is delivered (the last sample may be partial),
/// zero afterwards; n samples at dt.
Trajectory front_loaded_profile(const DeferrableSpec& spec, double dt, std::size_t n);

struct CounterexampleReport {
  bool deferrable_ok = false;
  bool qos_ok = false;
  std::string deferrable_reason;
  flexset::MemberVerdict member;
  Trajectory profile;
  /// Hours at which QoS first fails, if it does.
  std::optional<double> first_violation() const;
};

/// Runs the front-loaded profile through both the deferrable definition and
/// the flexibility-set membership test.
CounterexampleReport counterexample_check(const DeferrableSpec& spec, const flexset::Scenario& scn);

/// Energy the baseline of `scn` draws over [tau, tau + T].
double baseline_energy(const flexset::Scenario& scn, double tau, double window);

}  // namespace vesflex::deferrable
