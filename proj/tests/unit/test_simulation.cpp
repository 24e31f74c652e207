#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "windfarm/error.hpp"
#include "windfarm/simulation.hpp"

using namespace windfarm;

namespace {

const TurbineParams kP = default_params();

ScenarioConfig short_scenario() {
  ScenarioConfig sc = reference_scenario();
  sc.t_end = 2.0;
  sc.sample_dt = 0.01;
  sc.grid.steps = {{1.0, 0.95}};
  return sc;
}

ScenarioConfig constant_scenario(double v_w) {
  ScenarioConfig sc;
  sc.wind.kind = WindSpec::Kind::constant;
  sc.wind.value = v_w;
  sc.t_end = 1.0;
  return sc;
}

std::size_t out_col(std::string_view name) {
  const auto names = output_names();
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

}  // namespace

TEST_CASE("steady state") {
  for (double v_w : {6.0, 8.0, 10.0}) {
    CAPTURE(v_w);
    const PreparedScenario ps = prepare(kP, constant_scenario(v_w));
    const InputSample u = ps.inputs.at(0.0);
    const ParameterSet& s = ps.single;
    const State dx = rhs(ps.x_eq, u, s.params, s.derived);
    for (std::size_t i = 0; i < kStateSize; ++i) {
      if (i == index(Var::delta)) continue;
      CAPTURE(state_names()[i]);
      CHECK(std::abs(dx[i]) <= 1e-10);
    }
    // synchronous rotation of the PLL angle
    CHECK(dx[Var::delta] == doctest::Approx(kP.omega_nom).epsilon(1e-12));
    CHECK(steady_state_residual(ps.x_eq, u, s.params, s.derived) <= 1e-10);

    const Outputs o = outputs(ps.x_eq, u, s.params, s.derived);
    CHECK(std::abs(o.v_g_d) <= 1e-8);
    const double wr = ps.x_eq[Var::omega_r];
    CHECK(std::abs(o.T_e - kP.K_opt * wr * wr) <= 1e-8);
    CHECK(std::abs(o.p_r - ps.x_eq[Var::p_avg]) <= 1e-8);
    CHECK(wr > 0.4);
    CHECK(wr < 1.3);
  }
}

TEST_CASE("steady state preconditions") {
  CHECK_THROWS_AS(prepare(kP, constant_scenario(2.0)), ConfigError);
}

TEST_CASE("operating point is locally stable") {
  for (double v_w : {6.0, 8.0, 10.0}) {
    CAPTURE(v_w);
    const PreparedScenario ps = prepare(kP, constant_scenario(v_w));
    const InputSample u = ps.inputs.at(0.0);
    const auto eig = linear_stability(kP, ps.single.derived, ps.x_eq, u);
    REQUIRE(eig.size() == kStateSize);
    for (std::size_t k = 1; k < eig.size(); ++k) CHECK(eig[k - 1].real() >= eig[k].real());
    // one neutral mode, everything else strictly damped
    CHECK(std::abs(eig[0]) <= 1e-6);
    CHECK(eig[1].real() < -1e-3);
  }
}

TEST_CASE("shaft twist row of the Jacobian") {
  const PreparedScenario ps = prepare(kP, constant_scenario(8.0));
  const InputSample u = ps.inputs.at(0.0);
  const auto J = jacobian(ps.x_eq, u, kP, ps.single.derived);
  const std::size_t row = index(Var::theta_tw);
  CHECK(J[row * kStateSize + index(Var::omega_r)] ==
        doctest::Approx(-kP.omega_nom).epsilon(1e-6));
  CHECK(J[row * kStateSize + index(Var::omega_t)] ==
        doctest::Approx(kP.omega_nom).epsilon(1e-6));
  const State dw = wind_sensitivity(ps.x_eq, u, kP, ps.single.derived);
  CHECK(dw[Var::theta_tw] == 0.0);
  CHECK(dw[Var::omega_t] > 0.0);
}

TEST_CASE("scenario validation") {
  ScenarioConfig sc = reference_scenario();
  SUBCASE("horizon") {
    sc.t_end = 0.0;
    CHECK_THROWS_AS(validate(sc), ConfigError);
  }
  SUBCASE("event outside the horizon") {
    sc.grid.steps = {{25.0, 0.9}};
    CHECK_THROWS_AS(validate(sc), ConfigError);
  }
  SUBCASE("turbine count") {
    sc.n_turbines = 0;
    CHECK_THROWS_AS(validate(sc), ConfigError);
  }
  CHECK_NOTHROW(validate(reference_scenario()));
}

TEST_CASE("reference scenario inputs") {
  const ScenarioConfig sc = reference_scenario();
  CHECK(sc.t_end == 20.0);
  REQUIRE(sc.grid.steps.size() == 1);
  CHECK(sc.grid.steps[0].first == 10.0);
  const InputSignals u = build_inputs(sc, kP.omega_nom);
  for (double t = 0.0; t <= 20.0; t += 0.05) {
    const double v = u.wind(t);
    CHECK(v >= 7.0 - 1e-12);
    CHECK(v <= 9.0 + 1e-12);
  }
  CHECK(park(u.grid_abc(9.99), kP.omega_nom * 9.99).q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(park(u.grid_abc(10.01), kP.omega_nom * 10.01).q == doctest::Approx(0.95).epsilon(1e-12));
  const auto bps = breakpoints(sc);
  CHECK(std::find(bps.begin(), bps.end(), 10.0) != bps.end());

  ScenarioConfig other = sc;
  other.seed += 1;
  CHECK(build_inputs(other, kP.omega_nom).wind(3.0) != u.wind(3.0));
}

TEST_CASE("farm replicas and totals") {
  const PreparedScenario ps = prepare(kP, short_scenario());
  const Trajectory single = run_single(ps);
  const int n = 3;
  const Trajectory farm = run_farm(ps, n);
  REQUIRE(farm.size() == single.size());
  CHECK(farm.dim == n * kStateSize);
  CHECK(farm.output_dim == n * kOutputCount + kFarmTotals);

  const std::size_t p_tot = out_col("p_tot");
  for (std::size_t k = 0; k < farm.size(); ++k) {
    const auto x = farm.state(k);
    for (int j = 1; j < n; ++j) {
      CHECK(std::equal(x.begin(), x.begin() + kStateSize, x.begin() + j * kStateSize));
    }
    const double total = farm.output(k)[n * kOutputCount];
    const double one = single.output(k)[p_tot];
    CHECK(std::abs(total - n * one) <= 1e-9 * std::max(1e-3, std::abs(n * one)));
  }
}

TEST_CASE("one-turbine farm and aggregate reproduce the single turbine exactly") {
  const PreparedScenario ps = prepare(kP, short_scenario());
  const Trajectory single = run_single(ps);
  const Trajectory farm = run_farm(ps, 1);
  const Trajectory agg = run_aggregate(ps, 1);
  CHECK(farm.times == single.times);
  CHECK(farm.states == single.states);
  CHECK(agg.states == single.states);
  CHECK(agg.outputs == single.outputs);

  const EquivalenceReport r = verify_equivalence(single, single, 1);
  CHECK(r.global_max_rel_error == 0.0);
  for (double e : r.max_abs_error) CHECK(e == 0.0);
  CHECK(r.pass);
}

TEST_CASE("aggregate starts at the lifted equilibrium and tracks the farm") {
  const PreparedScenario ps = prepare(kP, short_scenario());
  const int n = 8;
  const Trajectory farm = run_farm(ps, n);
  const Trajectory agg = run_aggregate(ps, n);
  CHECK(agg.state(0)[index(Var::i_g_d)] == n * ps.x_eq[Var::i_g_d]);
  CHECK(agg.state(0)[index(Var::omega_r)] == ps.x_eq[Var::omega_r]);

  const EquivalenceReport r = verify_equivalence(farm, agg, n);
  CHECK(r.samples == farm.size());
  CHECK(r.pass);
  CHECK(r.global_max_rel_error <= 1e-5);
  CHECK(r.replica_spread == 0.0);
  CHECK(r.speedup > 0.0);
  for (std::size_t i = 0; i < kStateSize; ++i) {
    CHECK(r.max_abs_error[i] >= 0.0);
    CHECK(r.partition_rel_error[i] <= 1e-5);
  }

  // mismatched inputs are refused
  CHECK_THROWS_AS(verify_equivalence(farm, agg, 3), Error);
  const Trajectory single = run_single(ps);
  Trajectory shifted = single;
  shifted.times[1] += 1e-6;
  CHECK_THROWS_AS(verify_equivalence(single, shifted, 1), Error);
}

TEST_CASE("angle wrapping") {
  constexpr double pi = std::numbers::pi;
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  CHECK(wrap_angle(1000.0 * 2.0 * pi + 0.25) == doctest::Approx(0.25).epsilon(1e-9));
  for (double a = -50.0; a < 50.0; a += 0.37) {
    const double w = wrap_angle(a);
    CHECK(w > -pi);
    CHECK(w <= pi);
  }
}
