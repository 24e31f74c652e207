#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "windfarm/aggregation.hpp"
#include "windfarm/integrator.hpp"
#include "windfarm/model.hpp"
#include "windfarm/scenario.hpp"

namespace windfarm {

// ---- steady state ---------------------------------------------------------

struct SteadyStateOptions {
  double tolerance = 1e-11;  // infinity norm of the reduced residual
  int max_iterations = 60;
  double presim_duration = 30.0;  // s, fallback settling run
  bool allow_presim = true;
};

/// Physically motivated starting point at the frozen inputs `u`.
State initial_guess(const InputSample& u, const TurbineParams& p, const DerivedParams& d);

/// Equilibrium in the frame locked to the frozen grid sample. E_C is neutral
/// and stays at guess[E_C]; delta solves omega_PLL = 1, so rhs(x_eq)[delta]
/// equals omega_nom and every other component vanishes.
/// Throws SteadyStateError carrying the last residual.
State find_steady_state(const TurbineParams& p, const DerivedParams& d, const InputSignals& u,
                        double t, const State& guess, const SteadyStateOptions& opt = {});

/// Infinity norm over the 26 non-delta components of rhs.
double steady_state_residual(const State& x, const InputSample& u, const TurbineParams& p,
                             const DerivedParams& d);

// ---- linearization --------------------------------------------------------

/// Central-difference Jacobian of rhs at frozen inputs, row-major 27x27.
std::vector<double> jacobian(const State& x, const InputSample& u, const TurbineParams& p,
                             const DerivedParams& d, double rel_step = 1e-6);

/// Central-difference derivative of rhs with respect to the wind speed.
State wind_sensitivity(const State& x, const InputSample& u, const TurbineParams& p,
                       const DerivedParams& d, double step = 1e-6);

/// Eigenvalues of the frozen-time Jacobian, sorted by real part (descending).
/// The DC-link energy is a pure integrator, so one eigenvalue sits at zero.
std::vector<std::complex<double>> linear_stability(const TurbineParams& p, const DerivedParams& d,
                                                   const State& x_eq, const InputSample& u);

// ---- runs -----------------------------------------------------------------

/// Everything shared by the single, farm and aggregate runs of a scenario.
struct PreparedScenario {
  ScenarioConfig scenario;
  ParameterSet single;
  InputSignals inputs;
  std::vector<double> breakpoints;
  State x_eq;
};

PreparedScenario prepare(const TurbineParams& p, const ScenarioConfig& sc);

/// Farm outputs per sample: kOutputCount per replica followed by the totals.
inline constexpr std::size_t kFarmTotals = 4;  // p_tot, q_tot, i_g_d, i_g_q

Trajectory run_single(const PreparedScenario& ps);
Trajectory run_farm(const PreparedScenario& ps, int n);
/// `aggregate` overrides scale_params(ps.single, n), e.g. for negative controls.
Trajectory run_aggregate(const PreparedScenario& ps, int n, const ParameterSet* aggregate = nullptr);

Trajectory simulate_single(const TurbineParams& p, const ScenarioConfig& sc);
Trajectory simulate_farm(const TurbineParams& p, const ScenarioConfig& sc);
Trajectory simulate_aggregate(const TurbineParams& p, const ScenarioConfig& sc);

// ---- equivalence ----------------------------------------------------------

struct EquivalenceReport {
  int n = 1;
  std::size_t samples = 0;
  std::array<double, kStateSize> max_abs_error{};
  std::array<double, kStateSize> max_rel_error{};
  /// Unscaled comparison: states 17-27 directly, states 1-16 after dividing
  /// the aggregate by n; relative to 1 + max|x|.
  std::array<double, kStateSize> partition_rel_error{};
  double global_max_rel_error = 0.0;
  std::size_t worst_state = 0;  // 0-based
  double replica_spread = 0.0;  // max |replica_j - replica_0| over all samples
  double threshold = 1e-5;
  bool pass = true;
  double farm_wall_s = 0.0;
  double aggregate_wall_s = 0.0;
  double speedup = 0.0;
};

/// Compares the aggregate against psi * replica 0 at every sample. Throws
/// Error when the sample grids differ.
EquivalenceReport verify_equivalence(const Trajectory& farm, const Trajectory& aggregate, int n,
                                     double threshold = 1e-5);

/// Wraps an angle difference to (-pi, pi].
double wrap_angle(double a);

}  // namespace windfarm
