#include <cmath>
#include <numbers>

#include "doctest.h"
#include "windfarm/aero.hpp"
#include "windfarm/error.hpp"
#include "windfarm/params.hpp"

using namespace windfarm;

namespace {

std::string field_of(const TurbineParams& p) {
  try {
    derive(p);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return {};
}

}  // namespace

TEST_CASE("default parameters carry the machine data sheet") {
  const TurbineParams p = default_params();
  CHECK(p.omega_nom == doctest::Approx(2.0 * std::numbers::pi * 60.0).epsilon(1e-15));
  CHECK(p.omega_s == 1.0);
  CHECK(p.L_m == 4.0);
  CHECK(p.L_s == doctest::Approx(4.404).epsilon(1e-15));
  CHECK(p.L_r == doctest::Approx(4.42602).epsilon(1e-15));
  CHECK(p.R_s == 0.005);
  CHECK(p.R_r == doctest::Approx(0.0055).epsilon(1e-15));
  CHECK(p.H_t == 4.0);
  CHECK(p.H_g == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p.k_sh == 0.3);
  CHECK(p.c_sh == 0.01);
  CHECK(p.beta == 0.0);
  CHECK(p.Cp_max == 0.4382);
  CHECK(p.P_rated == 5.0e6);
  CHECK(p.R_blade == 58.6);
  CHECK(p.rho == 1.225);
}

TEST_CASE("derived machine quantities") {
  const TurbineParams p = default_params();
  const DerivedParams d = derive(p);

  // Hand arithmetic, not the library formulas.
  const double k_mrr = 4.0 / (1.005 * 1.101 * 4.0);
  CHECK(d.K_mrr == doctest::Approx(k_mrr).epsilon(1e-14));
  CHECK(std::abs(d.K_mrr - 0.903751) < 1e-4);

  const double ls_prime = 4.404 - 4.0 * k_mrr;
  CHECK(d.L_s_prime == doctest::Approx(ls_prime).epsilon(1e-13));
  CHECK(std::abs(d.L_s_prime - 0.788996) < 1e-4);

  CHECK(d.R_2 == doctest::Approx(k_mrr * k_mrr * 0.0055).epsilon(1e-13));
  CHECK(std::abs(d.R_2 - 0.004492) < 1e-6);
  CHECK(std::abs(d.R_1 - 0.009492) < 1e-6);
  CHECK(d.T_r == doctest::Approx(4.42602 / 0.0055).epsilon(1e-13));
  CHECK(d.X_m == p.omega_s * p.L_m);
}

TEST_CASE("derived invariants hold for the defaults") {
  const TurbineParams p = default_params();
  const DerivedParams d = derive(p);
  CHECK(d.L_s_prime > 0.0);
  CHECK(d.R_1 > p.R_s);
  CHECK(d.T_r > 0.0);
  CHECK(d.K_mrr > 0.0);
  CHECK(d.K_mrr < 1.0);
  CHECK(d.v_rated > 0.0);
  CHECK(d.omega_t_base > 0.0);
}

TEST_CASE("derive is deterministic") {
  const TurbineParams p = default_params();
  CHECK(derive(p) == derive(p));
  CHECK(default_params() == default_params());
}

TEST_CASE("rated operating point") {
  const TurbineParams p = default_params();
  const DerivedParams d = derive(p);
  const double area = std::numbers::pi * 58.6 * 58.6;
  const double v = std::cbrt(2.0 * 5.0e6 / (1.225 * area * 0.4382));
  CHECK(d.v_rated == doctest::Approx(v).epsilon(1e-13));
  // Watts per p.u. turbine speed: rated power at 1 p.u.
  CHECK(p.T_m_base == doctest::Approx(5.0e6).epsilon(1e-12));
  // MPPT constant on the machine base: C_p(λ_opt)·½ρAv³ / P_rated at ω_t = 1.
  CHECK(p.K_opt == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cp calibration peaks at the data-sheet maximum") {
  const TurbineParams p = default_params();
  const DerivedParams d = derive(p);
  const PowerCoefficientCurve curve(d.cp_scale);

  double best = 0.0, arg = 0.0;
  for (double l = 1.0; l <= 15.0; l += 1e-4) {
    const double c = curve(l, 0.0);
    if (c > best) {
      best = c;
      arg = l;
    }
  }
  CHECK(best == doctest::Approx(0.4382).epsilon(1e-8));
  CHECK(std::abs(d.lambda_opt - arg) < 2e-4);
  CHECK(curve(d.lambda_opt, 0.0) == doctest::Approx(0.4382).epsilon(1e-12));
}

TEST_CASE("validation names the offending field") {
  TurbineParams p = default_params();

  SUBCASE("non-physical inductances") {
    p.L_s = 4.0;
    p.L_r = 4.0;
    CHECK(field_of(p) == "L_s_prime");
  }
  SUBCASE("negative inertia") {
    p.H_t = -1.0;
    CHECK(field_of(p) == "H_t");
  }
  SUBCASE("zero capacitance") {
    p.C = 0.0;
    CHECK(field_of(p) == "C");
  }
  SUBCASE("Betz limit") {
    p.Cp_max = 0.6;
    CHECK(field_of(p) == "Cp_max");
  }
  SUBCASE("non-finite gain") {
    p.k_p_GCC = std::nan("");
    CHECK(field_of(p) == "k_p_GCC");
  }
}

TEST_CASE("field table covers every parameter") {
  const auto fields = param_fields();
  CHECK(fields.size() == sizeof(TurbineParams) / sizeof(double));
  REQUIRE(find_param_field("H_t") != nullptr);
  CHECK(find_param_field("H_t")->member == &TurbineParams::H_t);
  CHECK(find_param_field("no_such") == nullptr);
}
