#pragma once

#include <array>
#include <span>
#include <string_view>

#include "windfarm/inputs.hpp"
#include "windfarm/params.hpp"
#include "windfarm/state.hpp"

namespace windfarm {

struct DqPair {
  double q;
  double d;
};

/// 2/3-scaled Park transform of a three-phase set at angle delta.
DqPair park(const std::array<double, 3>& v_abc, double delta);

/// Calibrated power coefficient; max over lambda at beta = 0 equals Cp_max.
double cp_curve(double lambda, double beta, const DerivedParams& derived);

/// Tip-speed ratio for a per-unit turbine speed.
double tip_speed_ratio(double omega_t, double v_w, const TurbineParams& params,
                       const DerivedParams& derived);

/// Aerodynamic torque in p.u. Throws DomainError for omega_t <= 0.
double mechanical_torque(double omega_t, double v_w, const TurbineParams& params,
                         const DerivedParams& derived);

inline constexpr std::size_t kOutputCount = 18;

struct Outputs {
  double T_e, T_m;
  double p_s, q_s, p_g, q_g, p_r, q_r, p_tot, q_tot;
  double lambda, C_p;
  double v_g_d, v_g_q;
  double i_r_d, i_r_q, v_r_d, v_r_q;

  std::array<double, kOutputCount> as_array() const;
};

std::span<const std::string_view, kOutputCount> output_names();

/// Time derivative of every state for one turbine. Uses only the referred
/// quantities in `derived` for the machine, so an aggregate parameter set
/// produced by scale_params runs through the same code.
State rhs(const State& x, const InputSample& u, const TurbineParams& params,
          const DerivedParams& derived);

State rhs(const State& x, double t, const InputSignals& u, const TurbineParams& params,
          const DerivedParams& derived);

/// Same as rhs but writes into `dx` without constructing a State.
void rhs_into(std::span<const double, kStateSize> x, const InputSample& u,
              const TurbineParams& params, const DerivedParams& derived,
              std::span<double, kStateSize> dx);

Outputs outputs(const State& x, const InputSample& u, const TurbineParams& params,
                const DerivedParams& derived);

Outputs outputs(const State& x, double t, const InputSignals& u, const TurbineParams& params,
                const DerivedParams& derived);

}  // namespace windfarm
