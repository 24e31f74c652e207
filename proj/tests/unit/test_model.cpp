#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "random_state.hpp"
#include "windfarm/error.hpp"
#include "windfarm/model.hpp"

using namespace windfarm;

namespace {

const TurbineParams kP = default_params();
const DerivedParams kD = derive(kP);

InputSample grid_sample(double magnitude, double theta, double v_w = 8.0) {
  InputSample u;
  u.v_abc = balanced_abc(magnitude, theta);
  u.v_w = v_w;
  return u;
}

// Every state zero except the speeds, which T_m needs.
State quiet_state() {
  State x;
  x[Var::omega_r] = 1.0;
  x[Var::omega_t] = 1.0;
  return x;
}

}  // namespace

TEST_CASE("park transform") {
  SUBCASE("phase a aligned") {
    const DqPair v = park({1.0, -0.5, -0.5}, 0.0);
    CHECK(v.q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(v.d) < 1e-15);
  }
  SUBCASE("zero input") {
    for (double delta : {0.0, 1.0, 5.5}) {
      const DqPair v = park({0.0, 0.0, 0.0}, delta);
      CHECK(v.q == 0.0);
      CHECK(v.d == 0.0);
    }
  }
  SUBCASE("balanced set tracked by its own angle") {
    for (double theta : {0.3, 1.7, 4.0}) {
      const std::array<double, 3> v{std::cos(theta), std::cos(theta - 2.0 * std::numbers::pi / 3.0),
                                    std::cos(theta + 2.0 * std::numbers::pi / 3.0)};
      const DqPair dq = park(v, theta);
      CHECK(dq.q == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(dq.d) <= 1e-12);
    }
  }
  SUBCASE("tracking property on many angles and magnitudes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-20.0, 20.0), mag(0.1, 2.0);
    for (int k = 0; k < 1000; ++k) {
      const double theta = angle(rng), m = mag(rng);
      const DqPair dq = park(balanced_abc(m, theta), theta);
      CHECK(std::abs(dq.d) <= 1e-12);
      CHECK(dq.q == doctest::Approx(m).epsilon(1e-13));
    }
  }
}

TEST_CASE("power coefficient") {
  // vanishes towards zero tip speed and never goes negative
  CHECK(cp_curve(1e-3, 0.0, kD) <= 1e-5);
  CHECK(cp_curve(1e-9, 0.0, kD) <= 1e-11);
  for (double l = 1e-3; l < 20.0; l += 0.01) CHECK(cp_curve(l, 0.0, kD) >= 0.0);
  CHECK(cp_curve(kD.lambda_opt, 0.0, kD) == doctest::Approx(0.4382).epsilon(1e-12));
  CHECK(cp_curve(kD.lambda_opt * 0.8, 0.0, kD) < 0.4382);
  CHECK(cp_curve(kD.lambda_opt * 1.2, 0.0, kD) < 0.4382);
  CHECK_THROWS_AS(cp_curve(0.0, 0.0, kD), DomainError);
  CHECK_THROWS_AS(cp_curve(-1.0, 0.0, kD), DomainError);
}

TEST_CASE("mechanical torque") {
  CHECK(mechanical_torque(1.0, 0.0, kP, kD) == 0.0);
  CHECK(mechanical_torque(1.0, kD.v_rated, kP, kD) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tip_speed_ratio(1.0, kD.v_rated, kP, kD) == doctest::Approx(kD.lambda_opt).epsilon(1e-14));

  // Same λ, doubled wind: v³/ω grows by 8/2.
  const double t1 = mechanical_torque(0.6, 7.0, kP, kD);
  const double t2 = mechanical_torque(1.2, 14.0, kP, kD);
  CHECK(t2 / t1 == doctest::Approx(4.0).epsilon(1e-13));

  CHECK_THROWS_AS(mechanical_torque(0.0, 8.0, kP, kD), DomainError);
  CHECK_THROWS_AS(mechanical_torque(-0.1, 8.0, kP, kD), DomainError);
}

TEST_CASE("delivered torque, electrical torque and shaft balance") {
  const InputSample u = grid_sample(1.0, 0.0, 9.0);
  State x = quiet_state();
  x[Var::omega_r] = x[Var::omega_t] = 0.8;
  const double tm = mechanical_torque(0.8, 9.0, kP, kD);
  x[Var::theta_tw] = tm / kP.k_sh;
  x[Var::i_s_q] = tm;  // v_q = 1, v_d = 0 gives T_e = i_s_q

  const State dx = rhs(x, u, kP, kD);
  CHECK(std::abs(dx[Var::omega_r]) < 1e-15);
  CHECK(dx[Var::theta_tw] == 0.0);
  CHECK(std::abs(dx[Var::omega_t]) < 1e-15);
}

TEST_CASE("PLL at zero voltage") {
  InputSample u;
  u.v_w = 8.0;
  const State dx = rhs(quiet_state(), u, kP, kD);
  CHECK(dx[Var::v_PLL] == 0.0);
  CHECK(dx[Var::phi_PLL] == 0.0);
  // δ is an electrical angle in rad; ω_PLL = 1 p.u. means ω_nom rad/s.
  CHECK(dx[Var::delta] == kP.omega_nom);
}

TEST_CASE("electrical outputs") {
  SUBCASE("zero currents") {
    const Outputs o = outputs(quiet_state(), grid_sample(1.0, 0.4), kP, kD);
    CHECK(o.p_s == 0.0);
    CHECK(o.q_s == 0.0);
    CHECK(o.p_g == 0.0);
    CHECK(o.q_g == 0.0);
  }
  SUBCASE("stator power bilinear form") {
    State x = quiet_state();
    x[Var::i_s_q] = 0.5;
    x[Var::i_s_d] = 0.2;
    // grid angle equal to δ gives v_q = 1, v_d = 0
    x[Var::delta] = 0.9;
    const Outputs o = outputs(x, grid_sample(1.0, 0.9), kP, kD);
    CHECK(o.v_g_q == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(o.v_g_d) < 1e-14);
    CHECK(o.T_e == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(o.p_s == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(o.q_s == doctest::Approx(-0.2).epsilon(1e-13));
  }
  SUBCASE("totals are exact sums on random states") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10000; ++k) {
      const auto r = testing::random_point(rng);
      const Outputs o = outputs(r.x, r.u, kP, kD);
      CHECK(o.p_tot == o.p_s + o.p_g);
      CHECK(o.q_tot == o.q_s + o.q_g);
    }
  }
  CHECK(output_names().size() == kOutputCount);
  CHECK(output_names()[0] == "T_e");
}

TEST_CASE("vector field is time invariant under constant inputs") {
  InputSignals u;
  u.q_star = 0.05;
  const auto abc = balanced_abc(1.02, 0.7);
  u.grid_abc = [abc](double) { return abc; };
  u.wind = [](double) { return 8.5; };

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const State x = testing::random_point(rng).x;
    CHECK(rhs(x, 0.0, u, kP, kD) == rhs(x, 137.25, u, kP, kD));
  }
}

TEST_CASE("span and State interfaces agree") {
  std::mt19937_64 rng(5);
  const auto r = testing::random_point(rng);
  State out;
  rhs_into(r.x.span(), r.u, kP, kD, out.span());
  CHECK(out == rhs(r.x, r.u, kP, kD));
}

TEST_CASE("non-finite derivatives name the subsystem") {
  const InputSample u = grid_sample(1.0, 0.0);
  State x = quiet_state();

  SUBCASE("filter current") {
    x[Var::i_g_d] = std::nan("");
    try {
      rhs(x, u, kP, kD);
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      CHECK(e.subsystem() == "grid-side converter/LCL filter");
    }
  }
  SUBCASE("stator current") {
    x[Var::i_s_d] = std::numeric_limits<double>::infinity();
    try {
      rhs(x, u, kP, kD);
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      CHECK(e.subsystem() == "DFIG/rotor-side converter");
    }
  }
}
