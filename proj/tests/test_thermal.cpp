#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "common.hpp"
#include "oracles.hpp"
#include "vesflex/flexset.hpp"
#include "vesflex/thermal.hpp"

using namespace vesflex;
using doctest::Approx;

TEST_CASE("equilibrium power") {
  const auto p = fixture::zone_params();
  CHECK(thermal::equilibrium_power(p, 24.0, 0.0, 24.0) == 0.0);
  CHECK(thermal::equilibrium_power(p, 32.0, 1.5, 24.0) == Approx(1.272943163).epsilon(1e-9));
  // heating regime comes back negative and unclamped
  CHECK(thermal::equilibrium_power(p, 20.0, 0.0, 24.0) == Approx(-0.422185867).epsilon(1e-9));
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(thermal::ThermalParams({0.0, 1.0, 1.0, 1.0}).validate(), InputError);
  CHECK_THROWS_AS(thermal::ThermalParams({1.0, -1.0, 1.0, 1.0}).validate(), InputError);
  CHECK_THROWS_AS(thermal::ThermalParams({1.0, 1.0, 0.0, 1.0}).validate(), InputError);
  CHECK_THROWS_AS(thermal::ThermalParams({1.0, 1.0, 1.0, 0.0}).validate(), InputError);
  CHECK_THROWS_AS(Trajectory(0.0, {1.0}), InputError);
  CHECK_THROWS_AS(Trajectory(1.0, {NAN}), InputError);
}

TEST_CASE("equilibrium is a fixed point") {
  const auto scn = fixture::hot_day(10.0);
  const auto th = thermal::simulate(scn.params, 24.0, scn.baseline().power, scn.dist);
  REQUIRE(th.size() == scn.steps() + 1);
  for (double v : th.values()) CHECK(std::abs(v - 24.0) <= 1e-9);
}

TEST_CASE("step response matches the closed form") {
  const auto scn = fixture::hot_day(10.0);
  std::vector<double> p(scn.steps(), fixture::hot_peq() + 0.3);
  const auto th = thermal::simulate(scn.params, 24.0, Trajectory(scn.dt(), p), scn.dist);
  const double g = fixture::kR * fixture::kEta, tau = fixture::kR * fixture::kC;
  double worst = 0.0;
  for (std::size_t k = 0; k < th.size(); ++k) {
    const double expect = -g * 0.3 * (1.0 - std::exp(-th.time(k) / tau));
    worst = std::max(worst, std::abs(th[k] - 24.0 - expect));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("simulation agrees with fine-step integration of the ODE") {
  const oracle::Rc m{fixture::kR, fixture::kC, fixture::kEta};
  const double dt = 0.25;
  std::vector<double> p, ta, qd;
  for (int k = 0; k < 24; ++k) {
    p.push_back(1.0 + 0.8 * std::sin(0.7 * k));
    ta.push_back(28.0 + 4.0 * std::cos(0.3 * k));
    qd.push_back(1.0 + 0.1 * k);
  }
  const auto th = thermal::simulate(fixture::zone_params(3.0), 23.0, Trajectory(dt, p),
                                    thermal::DisturbanceSeries(dt, ta, qd));
  const auto ref = oracle::rk4(m, 23.0, p, ta, qd, dt);
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(th[k] == Approx(ref[k]).epsilon(1e-9));
}

TEST_CASE("simulate rejects mismatched inputs and names both lengths") {
  const auto p = fixture::zone_params();
  const auto dist = thermal::DisturbanceSeries::constant(0.1, 10, 30.0, 1.0);
  try {
    thermal::simulate(p, 24.0, Trajectory::constant(0.1, 9, 1.0), dist);
    FAIL("expected an error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('9') != std::string::npos);
    CHECK(msg.find("10") != std::string::npos);
  }
  CHECK_THROWS_AS(thermal::simulate(p, 24.0, Trajectory::constant(0.2, 10, 1.0), dist), InputError);
}

TEST_CASE("transfer function magnitude") {
  const auto p = fixture::zone_params();
  CHECK(thermal::tf_magnitude(p, 0.0) == Approx(9.4745).epsilon(1e-9));
  CHECK(thermal::tf_magnitude(p, 2.0 * std::numbers::pi) == Approx(0.433717).epsilon(1e-5));
  double prev = thermal::tf_magnitude(p, 0.0);
  for (double w = 0.1; w < 200.0; w *= 1.3) {
    const double g = thermal::tf_magnitude(p, w);
    CHECK(g <= prev);
    prev = g;
  }
  CHECK(thermal::tf_magnitude(p, 1e9) < 1e-8);
  CHECK_THROWS_AS(thermal::tf_magnitude(p, -1.0), InputError);
}

TEST_CASE("largest sinusoid amplitude") {
  const auto p = fixture::zone_params();
  CHECK(thermal::max_sine_amplitude(p, 1.0, 0.0) == Approx(0.1055465).epsilon(1e-6));
  CHECK(thermal::max_sine_amplitude(p, 1.0, 2.0 * std::numbers::pi) == Approx(2.30566).epsilon(1e-5));
  CHECK(thermal::max_sine_amplitude(p, 0.0, 3.0) == 0.0);
  double prev = 0.0;
  for (double w = 0.0; w < 50.0; w += 0.7) {
    const double a = thermal::max_sine_amplitude(p, 1.0, w);
    CHECK(a >= prev);
    prev = a;
  }
}

TEST_CASE("sinusoid amplitude survives simulation") {
  // 0.3 kW at one cycle per hour swings the temperature by 0.3 |G(j 2 pi)|.
  const double w = 2.0 * std::numbers::pi;
  const auto scn = fixture::hot_day(30.0, 1.0 / 600.0);
  const auto p = flexset::add_sinusoid(scn.baseline().power, 0.3, w);
  const auto th = thermal::simulate(scn.params, 24.0, p, scn.dist);
  const double amp = flexset::sinusoid_amplitude(th, w, 5.0 * fixture::kR * fixture::kC);
  CHECK(amp == Approx(0.3 * thermal::tf_magnitude(scn.params, w)).epsilon(0.02));
  CHECK(amp == Approx(0.130).epsilon(0.01));
}

TEST_CASE("baseline clamps and reports saturation") {
  const auto p = fixture::zone_params();
  const thermal::DisturbanceSeries two(1.0, {30.0, 34.0}, {1.0, 1.0});
  const auto b = thermal::baseline_trajectory(p, 24.0, two);
  CHECK(b.power[0] == Approx(0.918993).epsilon(1e-6));
  CHECK(b.power[1] == Approx(1.341179).epsilon(1e-6));
  CHECK_FALSE(b.saturated());

  const thermal::DisturbanceSeries hot(1.0, {45.0, 24.0, 10.0}, {3.0, 0.0, 0.0});
  const auto s = thermal::baseline_trajectory(p, 24.0, hot);
  CHECK(s.power[0] == p.p_rated);
  CHECK(s.power[1] == 0.0);
  CHECK(s.power[2] == 0.0);
  CHECK(s.unclamped[2] < 0.0);
  REQUIRE(s.saturated_high.size() == 1);
  CHECK(s.saturated_high[0] == 0);
  REQUIRE(s.saturated_low.size() == 1);
  CHECK(s.saturated_low[0] == 2);
}

TEST_CASE("disturbance CSV ingestion") {
  std::istringstream good("t_hours,theta_a_C,q_d_kW\n0,30,1\n0.5,31,1.2\n1,32,1.4\n");
  const auto d = thermal::DisturbanceSeries::from_csv(good);
  CHECK(d.size() == 3);
  CHECK(d.dt() == 0.5);
  CHECK(d.theta_a()[2] == 32.0);
  CHECK_FALSE(d.is_time_invariant());

  std::istringstream uneven("t_hours,theta_a_C,q_d_kW\n0,30,1\n0.5,31,1\n1.2,32,1\n");
  CHECK_THROWS_AS(thermal::DisturbanceSeries::from_csv(uneven), InputError);
  std::istringstream header("t,theta_a_C,q_d_kW\n0,30,1\n1,30,1\n");
  CHECK_THROWS_AS(thermal::DisturbanceSeries::from_csv(header), InputError);
  CHECK_THROWS_AS(thermal::DisturbanceSeries(1.0, {1.0, 2.0}, {1.0}), InputError);
  CHECK(thermal::fahrenheit_to_celsius(75.0) == Approx(23.8889).epsilon(1e-5));
}
