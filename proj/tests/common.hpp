#pragma once

#include "vesflex/flexset.hpp"
#include "vesflex/thermal.hpp"

namespace fixture {

inline constexpr double kR = 2.707;
inline constexpr double kC = 1.283;
inline constexpr double kEta = 3.5;

// Hot-afternoon scenario: 32 °C outside, 1.5 kW internal gain, 24 ± 1 °C,
// rated power 1 kW above the equilibrium demand.
inline double hot_peq() { return (1.5 + 8.0 / kR) / kEta; }

inline vesflex::thermal::ThermalParams zone_params(double p_rated = hot_peq() + 1.0) {
  return {kR, kC, kEta, p_rated};
}

inline vesflex::flexset::Scenario hot_day(double hours = 10.0, double dt = 1.0 / 60.0, double delta = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(hours / dt));
  return vesflex::flexset::make_time_invariant(zone_params(), 32.0, 1.5, 24.0, delta, dt, n);
}

}  // namespace fixture
