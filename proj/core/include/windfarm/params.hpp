#pragma once

#include <span>
#include <string_view>

namespace windfarm {

/// Physical, electrical and controller constants of one turbine.
///
/// Electrical quantities are per unit on the turbine rating, times in
/// seconds, speeds of the base frequency in rad/s. T_m_base is the aero
/// power base in watts per p.u. turbine speed, so the mechanical torque
/// equals 1 p.u. at rated wind and optimal tip-speed ratio.
struct TurbineParams {
  double omega_nom;  // rad/s
  double omega_s;    // p.u.
  double L_m;
  double L_s;
  double L_r;
  double R_s;
  double R_r;
  double H_t;  // s
  double H_g;  // s
  double k_sh;
  double c_sh;
  double beta;  // degrees
  double Cp_max;
  double P_rated;  // W
  double R_blade;  // m
  double rho;      // kg/m^3
  double T_m_base;
  double K_opt;

  double k_p_RPC;
  double k_i_RPC;
  double k_p_RTC;
  double k_i_RTC;
  double k_pd_RCC;
  double k_id_RCC;
  double k_pq_RCC;
  double k_iq_RCC;
  double k_p_GPC;
  double k_i_GPC;
  double k_p_GCC;
  double k_i_GCC;
  double k_p_PLL;
  double k_i_PLL;
  double omega_c_PLL;  // rad/s
  double omega_c_PC;   // rad/s

  double L_i;
  double L_g;
  double C_f;
  double C;

  bool operator==(const TurbineParams&) const = default;
};

/// Quantities referred to the stator plus the aerodynamic bases.
struct DerivedParams {
  double K_mrr;
  double L_s_prime;
  double R_2;
  double R_1;
  double T_r;
  double X_m;

  double cp_scale;      // power-coefficient calibration factor
  double lambda_opt;    // argmax of C_p at the configured pitch
  double v_rated;       // m/s, wind speed producing P_rated at Cp_max
  double omega_t_base;  // rad/s, turbine speed at lambda_opt and v_rated

  bool operator==(const DerivedParams&) const = default;
};

struct ParamField {
  std::string_view name;
  double TurbineParams::*member;
};

/// Every TurbineParams field in declaration order; names match config keys.
std::span<const ParamField> param_fields();

const ParamField* find_param_field(std::string_view name);

/// Parameter values of the reference 5 MW machine with the shipped
/// controller defaults.
TurbineParams default_params();

/// Throws ConfigError naming the first field that breaks an invariant.
void validate(const TurbineParams& params);

/// Table formulas for the referred machine constants and aero bases.
/// Throws ConfigError("L_s_prime") for a non-physical machine.
DerivedParams derive(const TurbineParams& params);

double rated_wind_speed(const TurbineParams& params);

/// T_m_base making T_m = 1 p.u. at the rated operating point.
double default_torque_base(const TurbineParams& params);

/// MPPT constant Cp_max*rho*pi*R^5/(2*lambda_opt^3) on the per-unit base.
double default_optimal_torque_constant(const TurbineParams& params);

}  // namespace windfarm
