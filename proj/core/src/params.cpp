#include "windfarm/params.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "windfarm/aero.hpp"
#include "windfarm/error.hpp"

namespace windfarm {
namespace {

#define WINDFARM_FIELD(name) ParamField{#name, &TurbineParams::name}

constexpr std::array kFields{
    WINDFARM_FIELD(omega_nom),   WINDFARM_FIELD(omega_s),     WINDFARM_FIELD(L_m),
    WINDFARM_FIELD(L_s),         WINDFARM_FIELD(L_r),         WINDFARM_FIELD(R_s),
    WINDFARM_FIELD(R_r),         WINDFARM_FIELD(H_t),         WINDFARM_FIELD(H_g),
    WINDFARM_FIELD(k_sh),        WINDFARM_FIELD(c_sh),        WINDFARM_FIELD(beta),
    WINDFARM_FIELD(Cp_max),      WINDFARM_FIELD(P_rated),     WINDFARM_FIELD(R_blade),
    WINDFARM_FIELD(rho),         WINDFARM_FIELD(T_m_base),    WINDFARM_FIELD(K_opt),
    WINDFARM_FIELD(k_p_RPC),     WINDFARM_FIELD(k_i_RPC),     WINDFARM_FIELD(k_p_RTC),
    WINDFARM_FIELD(k_i_RTC),     WINDFARM_FIELD(k_pd_RCC),    WINDFARM_FIELD(k_id_RCC),
    WINDFARM_FIELD(k_pq_RCC),    WINDFARM_FIELD(k_iq_RCC),    WINDFARM_FIELD(k_p_GPC),
    WINDFARM_FIELD(k_i_GPC),     WINDFARM_FIELD(k_p_GCC),     WINDFARM_FIELD(k_i_GCC),
    WINDFARM_FIELD(k_p_PLL),     WINDFARM_FIELD(k_i_PLL),     WINDFARM_FIELD(omega_c_PLL),
    WINDFARM_FIELD(omega_c_PC),  WINDFARM_FIELD(L_i),         WINDFARM_FIELD(L_g),
    WINDFARM_FIELD(C_f),         WINDFARM_FIELD(C),
};

#undef WINDFARM_FIELD

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string("parameter ") + name + " must be finite and > 0", name);
  }
}

double swept_area(const TurbineParams& p) {
  return std::numbers::pi * p.R_blade * p.R_blade;
}

}  // namespace

std::span<const ParamField> param_fields() { return kFields; }

const ParamField* find_param_field(std::string_view name) {
  for (const auto& f : kFields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

TurbineParams default_params() {
  TurbineParams p{};
  p.omega_nom = 2.0 * std::numbers::pi * 60.0;
  p.omega_s = 1.0;
  p.L_m = 4.0;
  p.L_s = 1.101 * p.L_m;
  p.L_r = 1.005 * p.L_s;
  p.R_s = 0.005;
  p.R_r = 1.1 * p.R_s;
  p.H_t = 4.0;
  p.H_g = 0.1 * p.H_t;
  p.k_sh = 0.3;
  p.c_sh = 0.01;
  p.beta = 0.0;
  p.Cp_max = 0.4382;
  p.P_rated = 5.0e6;
  p.R_blade = 58.6;
  p.rho = 1.225;

  // Controller and filter values are not part of the machine data sheet.
  // Signs follow the loop polarities of the model equations; the result is
  // locally asymptotically stable around 8 m/s and 1 p.u. grid voltage.
  p.k_p_RPC = 0.5;
  p.k_i_RPC = 5.0;
  p.k_p_RTC = -0.5;
  p.k_i_RTC = -5.0;
  p.k_pd_RCC = -0.5;
  p.k_id_RCC = -5.0;
  p.k_pq_RCC = -0.5;
  p.k_iq_RCC = -5.0;
  p.k_p_GPC = 0.5;
  p.k_i_GPC = 5.0;
  p.k_p_GCC = 0.3;
  p.k_i_GCC = 10.0;
  p.k_p_PLL = -0.005;
  p.k_i_PLL = -0.05;
  p.omega_c_PLL = 100.0;
  p.omega_c_PC = 50.0;

  p.L_i = 0.15;
  p.L_g = 0.15;
  p.C_f = 0.1;
  p.C = 1.0;

  p.T_m_base = default_torque_base(p);
  p.K_opt = default_optimal_torque_constant(p);
  return p;
}

void validate(const TurbineParams& p) {
  require_positive(p.omega_nom, "omega_nom");
  require_positive(p.omega_s, "omega_s");
  require_positive(p.L_m, "L_m");
  require_positive(p.L_s, "L_s");
  require_positive(p.L_r, "L_r");
  require_positive(p.R_s, "R_s");
  require_positive(p.R_r, "R_r");
  require_positive(p.H_t, "H_t");
  require_positive(p.H_g, "H_g");
  require_positive(p.omega_c_PLL, "omega_c_PLL");
  require_positive(p.omega_c_PC, "omega_c_PC");
  require_positive(p.L_i, "L_i");
  require_positive(p.L_g, "L_g");
  require_positive(p.C_f, "C_f");
  require_positive(p.C, "C");
  require_positive(p.P_rated, "P_rated");
  require_positive(p.R_blade, "R_blade");
  require_positive(p.rho, "rho");
  require_positive(p.T_m_base, "T_m_base");
  if (!(p.Cp_max > 0.0 && p.Cp_max <= 16.0 / 27.0)) {
    throw ConfigError("parameter Cp_max must lie in (0, 16/27]", "Cp_max");
  }
  for (const auto& f : kFields) {
    if (!std::isfinite(p.*f.member)) {
      throw ConfigError("parameter " + std::string(f.name) + " is not finite",
                        std::string(f.name));
    }
  }
}

DerivedParams derive(const TurbineParams& p) {
  validate(p);
  DerivedParams d{};
  d.K_mrr = p.L_m / p.L_r;
  d.L_s_prime = p.L_s - p.L_m * d.K_mrr;
  if (!(d.L_s_prime > 0.0)) {
    throw ConfigError("L_s_prime = L_s - L_m^2/L_r must be > 0 (non-physical machine)",
                      "L_s_prime");
  }
  d.R_2 = d.K_mrr * d.K_mrr * p.R_r;
  d.R_1 = p.R_s + d.R_2;
  d.T_r = p.L_r / p.R_r;
  d.X_m = p.omega_s * p.L_m;

  const auto curve = PowerCoefficientCurve::calibrated(p.Cp_max);
  d.cp_scale = curve.scale();
  d.lambda_opt = curve.argmax(p.beta);
  d.v_rated = rated_wind_speed(p);
  d.omega_t_base = d.lambda_opt * d.v_rated / p.R_blade;
  return d;
}

double rated_wind_speed(const TurbineParams& p) {
  return std::cbrt(2.0 * p.P_rated / (p.rho * swept_area(p) * p.Cp_max));
}

double default_torque_base(const TurbineParams& p) {
  // v_rated^3 written out so no libm rounding enters the base
  const double v3 = 2.0 * p.P_rated / (p.rho * swept_area(p) * p.Cp_max);
  constexpr double kRatedTurbineSpeed = 1.0;  // p.u.
  return p.rho * swept_area(p) * p.Cp_max * v3 / (2.0 * kRatedTurbineSpeed);
}

double default_optimal_torque_constant(const TurbineParams& p) {
  const auto curve = PowerCoefficientCurve::calibrated(p.Cp_max);
  const double lambda_opt = curve.argmax(p.beta);
  const double omega_base = lambda_opt * rated_wind_speed(p) / p.R_blade;
  const double k_si = p.Cp_max * p.rho * std::numbers::pi * std::pow(p.R_blade, 5) /
                      (2.0 * lambda_opt * lambda_opt * lambda_opt);
  const double torque_base_si = default_torque_base(p) / omega_base;
  return k_si * omega_base * omega_base / torque_base_si;
}

}  // namespace windfarm
