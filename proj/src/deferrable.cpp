#include "vesflex/deferrable.hpp"

#include <algorithm>
#include <cmath>

namespace vesflex::deferrable {

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::battery: return "battery";
    case Kind::bucket: return "bucket";
    case Kind::bakery: return "bakery";
  }
  return "?";
}

Kind parse_kind(std::string_view s) {
  if (s == "battery") return Kind::battery;
  if (s == "bucket") return Kind::bucket;
  if (s == "bakery") return Kind::bakery;
  throw InputError("unknown deferrable kind '" + std::string(s) + "'");
}

void DeferrableSpec::validate() const {
  if (!std::isfinite(tau) || tau < 0.0) throw InputError("deferrable: arrival must be >= 0");
  if (!(window > 0.0) || !std::isfinite(window)) throw InputError("deferrable: window must be positive");
  if (!(power_cap > 0.0) || !std::isfinite(power_cap)) throw InputError("deferrable: power cap must be positive");
  if (kind != Kind::bucket && !energy) throw InputError("deferrable: " + std::string(to_string(kind)) + " needs an energy");
  if (energy && (!std::isfinite(*energy) || *energy < 0.0)) throw InputError("deferrable: energy must be >= 0");
  if ((band_lo || band_hi) && kind != Kind::bucket) throw InputError("deferrable: energy band applies to buckets only");
  if (band_lo && band_hi && *band_lo > *band_hi) throw InputError("deferrable: energy band is crossed");
}

bool spec_feasible(const DeferrableSpec& spec) {
  spec.validate();
  const double most = spec.power_cap * spec.window + kEnergyTol;
  if (spec.kind == Kind::bucket) return !spec.band_lo || *spec.band_lo <= most;
  return *spec.energy <= most;
}

double bakery_run_length(const DeferrableSpec& spec) {
  spec.validate();
  return spec.energy.value_or(0.0) / spec.power_cap;
}

namespace {

std::size_t aligned_steps(double hours, double dt, const char* what) {
  const double steps = hours / dt;
  const double r = std::round(steps);
  if (std::abs(steps - r) > 1e-9 * std::max(1.0, r)) {
    throw InputError(std::string("deferrable: ") + what + " of " + std::to_string(hours) +
                     " h is not a multiple of the step " + std::to_string(dt) + " h");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

Check check_trajectory(const DeferrableSpec& spec, const Trajectory& p) {
  spec.validate();
  const auto first = aligned_steps(spec.tau, p.dt(), "arrival");
  const auto len = aligned_steps(spec.window, p.dt(), "window");
  if (first + len > p.size()) {
    throw InputError("deferrable: trajectory covers " + std::to_string(p.duration()) + " h, window ends at " +
                     std::to_string(spec.tau + spec.window) + " h");
  }
  auto fail = [](std::string why) { return Check{false, std::move(why)}; };
  const double ptol = 1e-9 * std::max(1.0, spec.power_cap);
  double e = 0.0;
  std::size_t runs = 0;
  bool on = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < -ptol || p[k] > spec.power_cap + ptol) {
      return fail("power " + std::to_string(p[k]) + " kW at t = " + std::to_string(p.time(k)) + " h outside [0, P]");
    }
    const bool inside = k >= first && k < first + len;
    if (!inside && spec.kind != Kind::bucket && p[k] > ptol) {
      return fail("demand outside the window at t = " + std::to_string(p.time(k)) + " h");
    }
    e += p[k] * p.dt();
    if (spec.kind == Kind::bucket) {
      if ((spec.band_lo && inside && k + 1 == first + len && e < *spec.band_lo - kEnergyTol) ||
          (spec.band_hi && e > *spec.band_hi + kEnergyTol)) {
        return fail("running energy " + std::to_string(e) + " kWh leaves the band");
      }
    }
    const bool nonzero = p[k] > ptol;
    if (nonzero && !on) ++runs;
    on = nonzero;
  }
  if (spec.kind == Kind::bucket) return {};
  if (std::abs(e - *spec.energy) > kEnergyTol) {
    return fail("delivered " + std::to_string(e) + " kWh, required " + std::to_string(*spec.energy) + " kWh");
  }
  if (spec.kind == Kind::bakery && runs > 1) {
    return fail("demand is split over " + std::to_string(runs) + " separate intervals");
  }
  return {};
}

Trajectory front_loaded_profile(const DeferrableSpec& spec, double dt, std::size_t n) {
  spec.validate();
  if (!spec.energy) throw InputError("deferrable: front-loaded profile needs an energy");
  const auto first = aligned_steps(spec.tau, dt, "arrival");
  std::vector<double> p(n, 0.0);
  double left = *spec.energy;
  for (std::size_t k = first; k < n && left > 0.0; ++k) {
    p[k] = std::min(spec.power_cap, left / dt);
    left -= p[k] * dt;
  }
  return Trajectory(dt, std::move(p), "kW");
}

std::optional<double> CounterexampleReport::first_violation() const {
  if (member.status == flexset::MemberStatus::qos_violation) return member.violation_time();
  if (member.status == flexset::MemberStatus::power_out_of_range) return profile.time(member.power_index);
  return std::nullopt;
}

CounterexampleReport counterexample_check(const DeferrableSpec& spec, const flexset::Scenario& scn) {
  scn.validate();
  CounterexampleReport rep;
  rep.profile = front_loaded_profile(spec, scn.dt(), scn.steps());
  const auto c = check_trajectory(spec, rep.profile);
  rep.deferrable_ok = c.ok;
  rep.deferrable_reason = c.reason;
  rep.member = flexset::is_member(rep.profile, scn);
  rep.qos_ok = rep.member.member();
  return rep;
}

double baseline_energy(const flexset::Scenario& scn, double tau, double window) {
  const auto base = scn.baseline().power;
  const auto first = aligned_steps(tau, scn.dt(), "arrival");
  const auto len = aligned_steps(window, scn.dt(), "window");
  if (first + len > base.size()) throw InputError("deferrable: window extends past the scenario");
  double e = 0.0;
  for (std::size_t k = first; k < first + len; ++k) e += base[k] * scn.dt();
  return e;
}

}  // namespace vesflex::deferrable
