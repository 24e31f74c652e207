#pragma once

#include <array>
#include <span>
#include <string_view>

#include "windfarm/inputs.hpp"
#include "windfarm/params.hpp"
#include "windfarm/state.hpp"

namespace windfarm {

struct ScalingVector {
  int n;
  std::array<double, kStateSize> psi;
};

/// N on the first kScaledStates entries, 1 on the rest. Throws for n < 1.
ScalingVector psi(int n);

struct ParameterSet {
  TurbineParams params;
  DerivedParams derived;

  bool operator==(const ParameterSet&) const = default;
};

/// Aggregate parameters of n identical parallel turbines. Referred machine
/// quantities in `derived` are scaled directly; primitives they came from
/// (L_m, L_s, L_r, R_s, R_r) are left untouched and are not read by the model.
ParameterSet scale_params(const TurbineParams& params, const DerivedParams& derived, int n);

/// Real-valued scale factor; the law holds for any positive scalar.
ParameterSet scale_params_real(const ParameterSet& set, double n);

enum class ScaleKind { multiply, divide };

struct ScaledParameter {
  std::string_view name;
  ScaleKind kind;
};

/// The parameters touched by scale_params, in a fixed order.
std::span<const ScaledParameter> scaled_parameters();

/// Copy of `aggregate` with one scaled parameter restored to its value in
/// `single`. Throws ConfigError for a name not in scaled_parameters().
ParameterSet unscale_parameter(const ParameterSet& aggregate, const ParameterSet& single,
                               std::string_view name);

State lift_state(const State& x, int n);
State project_state(const State& x_r, int n);

/// q_star times n; grid and wind callables shared.
InputSignals scale_inputs(const InputSignals& u, int n);
InputSample scale_inputs(const InputSample& u, int n);

}  // namespace windfarm
