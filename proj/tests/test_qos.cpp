#include <algorithm>
#include <doctest.h>

#include "vesflex/qos.hpp"

using namespace vesflex;

namespace {

qos::QoSBounds band(double lo, double hi) {
  qos::QoSBounds b;
  b.theta_min = lo;
  b.theta_max = hi;
  return b;
}

}  // namespace

TEST_CASE("lockout counter") {
  SUBCASE("constant signal never switches") {
    const auto s = qos::lockout_count(Trajectory::constant(0.01, 50, 1.0), 0.1);
    for (double v : s.values()) CHECK(v == 0.0);
  }
  SUBCASE("two switches inside one window") {
    // off before t = 0, on at 0, off again at 0.05 h
    std::vector<double> u(20, 0.0);
    for (int k = 0; k < 5; ++k) u[k] = 1.0;
    const auto s = qos::lockout_count(Trajectory(0.01, u), 0.1, 0.0);
    CHECK(*std::max_element(s.values().begin(), s.values().end()) == 2.0);
    CHECK(s[0] == 1.0);
    CHECK(s[5] == 2.0);
    CHECK(s[10] == 1.0);  // the t = 0 switch has left (0, 0.1]
  }
  SUBCASE("switches exactly one window apart never overlap") {
    std::vector<double> u(40, 0.0);
    for (int k = 10; k < 20; ++k) u[k] = 1.0;
    for (int k = 30; k < 40; ++k) u[k] = 1.0;
    const auto s = qos::lockout_count(Trajectory(0.01, u), 0.1);
    CHECK(*std::max_element(s.values().begin(), s.values().end()) == 1.0);
  }
  CHECK_THROWS_AS(qos::lockout_count(Trajectory(0.01, {0.0, 0.5}), 0.1), InputError);
  CHECK_THROWS_AS(qos::lockout_count(Trajectory(0.1, {0.0, 1.0}), 0.05), InputError);
}

TEST_CASE("temperature membership uses closed intervals") {
  const auto b = band(23.0, 25.0);
  CHECK(qos::satisfies({Trajectory::constant(0.1, 5, 24.0), std::nullopt, std::nullopt}, b).feasible);
  CHECK(qos::satisfies({Trajectory(0.1, {24.0, 23.0, 25.0}), std::nullopt, std::nullopt}, b).feasible);
  const auto v = qos::satisfies({Trajectory(0.1, {24.0, 24.5, 25.01, 22.0}), std::nullopt, std::nullopt}, b);
  CHECK_FALSE(v.feasible);
  CHECK(v.index == 2);
  CHECK(v.channel == qos::Channel::temperature);
  CHECK(v.bound == 25.0);
}

TEST_CASE("lockout channel reports the first double switch") {
  auto b = band(20.0, 30.0);
  b.tau_lock = 0.1;
  std::vector<double> u(20, 0.0);
  for (int k = 0; k < 5; ++k) u[k] = 1.0;
  const auto s = qos::lockout_count(Trajectory(0.01, u), 0.1, 0.0);
  const auto v = qos::satisfies({Trajectory::constant(0.01, 20, 24.0), std::nullopt, s}, b);
  CHECK_FALSE(v.feasible);
  CHECK(v.channel == qos::Channel::lockout);
  CHECK(v.index == 5);
  CHECK(v.value == 2.0);
  CHECK_THROWS_AS(qos::satisfies({Trajectory::constant(0.01, 20, 24.0), std::nullopt, std::nullopt}, b), InputError);
}

TEST_CASE("first violation is the earliest over all channels") {
  auto b = band(20.0, 30.0);
  b.w_min = 0.004;
  b.w_max = 0.010;
  const Trajectory theta(1.0, {24.0, 24.0, 31.0, 24.0});
  const Trajectory w(1.0, {0.008, 0.012, 0.008, 0.008});
  const auto v = qos::satisfies({theta, w, std::nullopt}, b);
  CHECK(v.index == 1);
  CHECK(v.channel == qos::Channel::humidity);
  // same-sample tie goes to temperature
  const Trajectory w2(1.0, {0.008, 0.008, 0.012, 0.008});
  CHECK(qos::satisfies({theta, w2, std::nullopt}, b).channel == qos::Channel::temperature);
}

TEST_CASE("shrinking bounds never restores feasibility") {
  const Trajectory theta(0.5, {24.0, 24.6, 23.3, 24.9, 23.1});
  for (double lo = 22.0; lo <= 24.0; lo += 0.25) {
    for (double hi = 24.0; hi <= 26.0; hi += 0.25) {
      if (lo + 0.1 > hi - 0.1) continue;
      const bool wide = qos::satisfies({theta, std::nullopt, std::nullopt}, band(lo, hi)).feasible;
      const bool narrow = qos::satisfies({theta, std::nullopt, std::nullopt}, band(lo + 0.1, hi - 0.1)).feasible;
      CHECK((!narrow || wide));
    }
  }
}

TEST_CASE("bounds validation") {
  CHECK_THROWS_AS(band(25.0, 24.0).validate(), InputError);
  CHECK_NOTHROW(band(24.0, 24.0).validate());
  auto b = band(20.0, 25.0);
  b.w_min = 0.01;
  b.w_max = 0.005;
  CHECK_THROWS_AS(b.validate(), InputError);
  auto c = band(20.0, 25.0);
  c.tau_lock = 0.0;
  CHECK_THROWS_AS(c.validate(), InputError);
}
