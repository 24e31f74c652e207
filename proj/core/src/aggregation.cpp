#include "windfarm/aggregation.hpp"

#include <string>

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

constexpr std::array<ScaledParameter, 20> kScaled{{
    {"H_t", ScaleKind::multiply},      {"H_g", ScaleKind::multiply},
    {"c_sh", ScaleKind::multiply},     {"k_sh", ScaleKind::multiply},
    {"K_opt", ScaleKind::multiply},    {"C_f", ScaleKind::multiply},
    {"C", ScaleKind::multiply},        {"T_m_base", ScaleKind::divide},
    {"R_1", ScaleKind::divide},        {"R_2", ScaleKind::divide},
    {"L_s_prime", ScaleKind::divide},  {"X_m", ScaleKind::divide},
    {"k_pd_RCC", ScaleKind::divide},   {"k_id_RCC", ScaleKind::divide},
    {"k_pq_RCC", ScaleKind::divide},   {"k_iq_RCC", ScaleKind::divide},
    {"L_i", ScaleKind::divide},        {"L_g", ScaleKind::divide},
    {"k_p_GCC", ScaleKind::divide},    {"k_i_GCC", ScaleKind::divide},
}};

// Resolves a scaled name to the double it refers to in either struct.
double& slot(ParameterSet& set, std::string_view name) {
  if (name == "R_1") return set.derived.R_1;
  if (name == "R_2") return set.derived.R_2;
  if (name == "L_s_prime") return set.derived.L_s_prime;
  if (name == "X_m") return set.derived.X_m;
  const ParamField* f = find_param_field(name);
  if (f == nullptr) {
    throw ConfigError("unknown parameter '" + std::string(name) + "'", std::string(name));
  }
  return set.params.*(f->member);
}

void check_n(double n) {
  if (!(n > 0.0)) {
    throw ConfigError("turbine count must be positive", "n_turbines");
  }
}

}  // namespace

ScalingVector psi(int n) {
  check_n(n);
  ScalingVector s{n, {}};
  for (std::size_t i = 0; i < kStateSize; ++i) {
    s.psi[i] = i < kScaledStates ? static_cast<double>(n) : 1.0;
  }
  return s;
}

std::span<const ScaledParameter> scaled_parameters() { return kScaled; }

ParameterSet scale_params_real(const ParameterSet& set, double n) {
  check_n(n);
  ParameterSet out = set;
  for (const auto& sp : kScaled) {
    double& v = slot(out, sp.name);
    v = sp.kind == ScaleKind::multiply ? v * n : v / n;
  }
  return out;
}

ParameterSet scale_params(const TurbineParams& params, const DerivedParams& derived, int n) {
  check_n(n);
  return scale_params_real({params, derived}, static_cast<double>(n));
}

ParameterSet unscale_parameter(const ParameterSet& aggregate, const ParameterSet& single,
                               std::string_view name) {
  bool known = false;
  for (const auto& sp : kScaled) {
    known = known || sp.name == name;
  }
  if (!known) {
    throw ConfigError("'" + std::string(name) + "' is not a scaled parameter", std::string(name));
  }
  ParameterSet out = aggregate;
  ParameterSet src = single;
  slot(out, name) = slot(src, name);
  return out;
}

State lift_state(const State& x, int n) {
  const ScalingVector s = psi(n);
  State out;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    out.values[i] = s.psi[i] * x.values[i];
  }
  return out;
}

State project_state(const State& x_r, int n) {
  const ScalingVector s = psi(n);
  State out;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    out.values[i] = x_r.values[i] / s.psi[i];
  }
  return out;
}

InputSignals scale_inputs(const InputSignals& u, int n) {
  check_n(n);
  InputSignals out = u;
  out.q_star = u.q_star * n;
  return out;
}

InputSample scale_inputs(const InputSample& u, int n) {
  check_n(n);
  InputSample out = u;
  out.q_star = u.q_star * n;
  return out;
}

}  // namespace windfarm
