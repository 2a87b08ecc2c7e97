#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "common.hpp"
#include "oracles.hpp"
#include "vesflex/deferrable.hpp"

using namespace vesflex;
using namespace vesflex::deferrable;
using doctest::Approx;

namespace {

DeferrableSpec spec(double e, double t, double p, Kind k, double tau = 0.0) {
  DeferrableSpec s;
  s.tau = tau;
  s.energy = e;
  s.window = t;
  s.power_cap = p;
  s.kind = k;
  return s;
}

Trajectory runs(double dt, std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& on, double level) {
  std::vector<double> v(n, 0.0);
  for (auto [a, b] : on) {
    for (std::size_t k = a; k < b; ++k) v[k] = level;
  }
  return Trajectory(dt, v);
}

flexset::Scenario cold_day(double hours = 10.0) {
  const double dt = 1.0 / 60.0;
  return flexset::make_time_invariant(fixture::zone_params(), 15.0, 0.2, 24.0, 1.0, dt,
                                      static_cast<std::size_t>(std::llround(hours / dt)));
}

}  // namespace

TEST_CASE("spec feasibility") {
  CHECK(spec_feasible(spec(5, 10, 1, Kind::battery)));
  CHECK_FALSE(spec_feasible(spec(12, 10, 1, Kind::battery)));
  CHECK(spec_feasible(spec(5, 10, 1, Kind::bakery)));
  CHECK(bakery_run_length(spec(5, 10, 1, Kind::bakery)) == 5.0);
  CHECK_FALSE(spec_feasible(spec(12, 10, 1, Kind::bakery)));
  DeferrableSpec bucket;
  bucket.window = 2.0;
  bucket.power_cap = 1.0;
  bucket.kind = Kind::bucket;
  CHECK(spec_feasible(bucket));
  bucket.band_lo = 3.0;
  CHECK_FALSE(spec_feasible(bucket));
  CHECK_THROWS_AS(spec(-1, 10, 1, Kind::battery).validate(), InputError);
  CHECK_THROWS_AS(spec(1, 0, 1, Kind::battery).validate(), InputError);
  CHECK_THROWS_AS(spec(1, 1, 0, Kind::battery).validate(), InputError);
  CHECK(parse_kind("bakery") == Kind::bakery);
  CHECK_THROWS_AS(parse_kind("oven"), InputError);
}

TEST_CASE("trajectory checks") {
  const double dt = 0.25;
  const auto bat = spec(5, 10, 1, Kind::battery, 1.0);
  const auto bak = spec(5, 10, 1, Kind::bakery, 1.0);
  const auto flat = runs(dt, 48, {{4, 44}}, 0.5);
  CHECK(trajectory_satisfies(bat, flat));
  CHECK(trajectory_satisfies(bak, flat));
  const auto front = front_loaded_profile(bat, dt, 48);
  CHECK(front[3] == 0.0);
  CHECK(front[4] == 1.0);
  CHECK(front[23] == 1.0);
  CHECK(front[24] == 0.0);
  CHECK(trajectory_satisfies(bat, front));
  const auto split = runs(dt, 48, {{4, 14}, {30, 40}}, 1.0);
  CHECK(trajectory_satisfies(bat, split));
  const auto why = check_trajectory(bak, split);
  CHECK_FALSE(why.ok);
  CHECK_FALSE(why.reason.empty());
  CHECK_FALSE(trajectory_satisfies(bat, runs(dt, 48, {{0, 20}}, 1.0)));   // draws before arrival
  CHECK_FALSE(trajectory_satisfies(bat, runs(dt, 48, {{4, 14}}, 1.0)));   // short of E
  CHECK_FALSE(trajectory_satisfies(bat, runs(dt, 48, {{4, 14}}, 2.0)));   // above the cap
  CHECK_THROWS_AS(check_trajectory(bat, runs(dt, 40, {{4, 24}}, 1.0)), InputError);
  CHECK_THROWS_AS(check_trajectory(spec(5, 10, 1, Kind::battery, 0.1), flat), InputError);
}

TEST_CASE("partial last sample of a front-loaded profile") {
  const auto s = spec(1.1, 4, 1, Kind::battery);
  const auto p = front_loaded_profile(s, 0.5, 8);
  CHECK(p[1] == 1.0);
  CHECK(p[2] == Approx(0.2));
  CHECK(p[3] == 0.0);
  CHECK(trajectory_satisfies(s, p));
}

TEST_CASE("every bakery trajectory passes as a battery") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 15);
  std::uniform_real_distribution<double> lvl(0.0, 1.0);
  int bakeries = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> v(16, 0.0);
    int a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    for (int k = a; k <= b; ++k) v[k] = lvl(rng) * (trial % 3 == 0 ? 0.0 : 1.0) + 0.1;
    if (trial % 5 == 0) v[(b + 3) % 16] += 0.3;
    double e = 0.0;
    for (double x : v) e += std::min(x, 1.0) * 0.5;
    for (double& x : v) x = std::min(x, 1.0);
    const Trajectory p(0.5, v);
    const auto bak = spec(e, 8, 1, Kind::bakery);
    const auto bat = spec(e, 8, 1, Kind::battery);
    if (trajectory_satisfies(bak, p)) {
      ++bakeries;
      CHECK(trajectory_satisfies(bat, p));
    }
  }
  CHECK(bakeries > 50);
}

TEST_CASE("spec feasibility agrees with lattice search") {
  // 0.1 kW by 0.5 h profiles; exists one with the right energy?
  for (double cap : {0.2, 0.3}) {
    for (double window : {1.0, 1.5}) {
      const auto slots = static_cast<std::size_t>(window / 0.5);
      const int levels = static_cast<int>(std::lround(cap / 0.1));
      for (int units = 0; units <= 12; ++units) {
        const double e = 0.05 * units;
        bool any = false, any_contig = false;
        std::vector<int> p(slots, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
          if (k == slots) {
            int sum = 0;
            for (int x : p) sum += x;
            if (sum != units) return;
            any = true;
            std::size_t first = slots, last = 0, nz = 0;
            for (std::size_t i = 0; i < slots; ++i) {
              if (p[i] > 0) {
                first = std::min(first, i);
                last = i;
                ++nz;
              }
            }
            if (nz == 0 || last - first + 1 == nz) any_contig = true;
            return;
          }
          for (int l = 0; l <= levels; ++l) {
            p[k] = l;
            rec(k + 1);
          }
        };
        rec(0);
        CAPTURE(e);
        CHECK(spec_feasible(spec(e, window, cap, Kind::battery)) == any);
        CHECK(spec_feasible(spec(e, window, cap, Kind::bakery)) == any_contig);
      }
    }
  }
}

TEST_CASE("hot-day energy applied on a cold day breaks comfort") {
  const auto hot = fixture::hot_day(10.0);
  const double e_hot = baseline_energy(hot, 0.0, 10.0);
  CHECK(e_hot == Approx(10.0 * fixture::hot_peq()).epsilon(1e-9));
  CHECK(e_hot == Approx(12.7294).epsilon(1e-5));
  const auto cold = cold_day();
  const auto s = spec(e_hot, 10.0, cold.params.p_rated, Kind::battery);
  CHECK(spec_feasible(s));
  const auto rep = counterexample_check(s, cold);
  CHECK(rep.deferrable_ok);
  CHECK_FALSE(rep.qos_ok);
  REQUIRE(rep.first_violation());
  // crossing of 23 °C under full power from 24 °C
  const oracle::Rc m{fixture::kR, fixture::kC, fixture::kEta};
  const double ss = 15.0 + m.r * 0.2 - m.r * m.eta * cold.params.p_rated;
  const double t_cross = m.r * m.c * std::log((24.0 - ss) / (23.0 - ss));
  CHECK(*rep.first_violation() >= t_cross);
  CHECK(*rep.first_violation() < t_cross + cold.dt() + 1e-12);
  CHECK(rep.member.theta[rep.member.qos.index] < 23.0);
}

TEST_CASE("same-day baseline satisfies both definitions") {
  const auto mild = flexset::make_time_invariant(fixture::zone_params(), 28.0, 1.0, 24.0, 1.0, 1.0 / 60.0, 600);
  const double e = baseline_energy(mild, 0.0, 10.0);
  const auto base = mild.baseline().power;
  const auto s = spec(e, 10.0, mild.params.p_rated, Kind::battery);
  CHECK(trajectory_satisfies(s, base));
  CHECK(trajectory_satisfies(spec(e, 10.0, mild.params.p_rated, Kind::bakery), base));
  CHECK(flexset::is_member(base, mild).member());
}

TEST_CASE("zero energy reports free-floating comfort") {
  const auto cold = cold_day(2.0);
  const auto rep = counterexample_check(spec(0.0, 2.0, cold.params.p_rated, Kind::battery), cold);
  CHECK(rep.deferrable_ok);
  // 15 °C outside with 0.2 kW gains drifts below 23 °C even with the unit off
  CHECK_FALSE(rep.qos_ok);
  const oracle::Rc m{fixture::kR, fixture::kC, fixture::kEta};
  const double ss = 15.0 + m.r * 0.2;
  CHECK(*rep.first_violation() >= m.r * m.c * std::log((24.0 - ss) / (23.0 - ss)));
  const auto warm = flexset::make_time_invariant(fixture::zone_params(), 25.0, 0.2, 24.0, 1.0, 1.0 / 60.0, 120);
  const auto ok = counterexample_check(spec(0.0, 2.0, warm.params.p_rated, Kind::battery), warm);
  CHECK(ok.deferrable_ok);
  CHECK(ok.qos_ok);
  CHECK_FALSE(ok.first_violation());
}
