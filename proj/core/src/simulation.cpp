#include "windfarm/simulation.hpp"

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

using Fixed = std::span<const double, kStateSize>;
using FixedOut = std::span<double, kStateSize>;

void append_outputs(Trajectory& tr, const InputSignals& u, const ParameterSet& ps,
                    std::size_t replicas, bool totals) {
  const std::size_t i_g_d = index(Var::i_g_d);
  const std::size_t i_g_q = index(Var::i_g_q);
  tr.output_dim = kOutputCount * replicas + (totals ? kFarmTotals : 0);
  tr.outputs.clear();
  tr.outputs.reserve(tr.size() * tr.output_dim);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const InputSample s = u.at(tr.times[k]);
    const std::span<const double> xk = tr.state(k);
    std::array<double, kFarmTotals> sum{};
    for (std::size_t j = 0; j < replicas; ++j) {
      const State x = State::from(xk.subspan(j * kStateSize, kStateSize));
      const Outputs o = outputs(x, s, ps.params, ps.derived);
      const auto arr = o.as_array();
      tr.outputs.insert(tr.outputs.end(), arr.begin(), arr.end());
      sum[0] += o.p_tot;
      sum[1] += o.q_tot;
      sum[2] += x.values[i_g_d];
      sum[3] += x.values[i_g_q];
    }
    if (totals) {
      tr.outputs.insert(tr.outputs.end(), sum.begin(), sum.end());
    }
  }
}

Trajectory run_one(const PreparedScenario& ps, const ParameterSet& set, const InputSignals& u,
                   const State& x0) {
  const VectorField f = [&](double t, std::span<const double> x, std::span<double> dx) {
    rhs_into(Fixed(x.data(), kStateSize), u.at(t), set.params, set.derived,
             FixedOut(dx.data(), kStateSize));
  };
  Trajectory tr = integrate(f, x0.span(), 0.0, ps.scenario.t_end, ps.scenario.integrator,
                            ps.scenario.sample_dt, ps.breakpoints);
  append_outputs(tr, u, set, 1, false);
  return tr;
}

}  // namespace

PreparedScenario prepare(const TurbineParams& p, const ScenarioConfig& sc) {
  validate(sc);
  PreparedScenario ps;
  ps.scenario = sc;
  ps.single = {p, derive(p)};
  ps.inputs = build_inputs(sc, p.omega_nom);
  ps.breakpoints = breakpoints(sc);
  const InputSample u0 = ps.inputs.at(0.0);
  if (!(u0.v_w >= 3.0)) {
    throw ConfigError("initial wind speed must be at least 3 m/s for a steady start", "wind");
  }
  ps.x_eq = find_steady_state(p, ps.single.derived, ps.inputs, 0.0,
                              initial_guess(u0, p, ps.single.derived));
  return ps;
}

Trajectory run_single(const PreparedScenario& ps) {
  return run_one(ps, ps.single, ps.inputs, ps.x_eq);
}

Trajectory run_farm(const PreparedScenario& ps, int n) {
  if (n < 1) throw ConfigError("turbine count must be positive", "n_turbines");
  const auto replicas = static_cast<std::size_t>(n);
  const ParameterSet& set = ps.single;
  const InputSignals& u = ps.inputs;
  const VectorField f = [&](double t, std::span<const double> x, std::span<double> dx) {
    const InputSample s = u.at(t);
    for (std::size_t j = 0; j < replicas; ++j) {
      rhs_into(Fixed(x.data() + j * kStateSize, kStateSize), s, set.params, set.derived,
               FixedOut(dx.data() + j * kStateSize, kStateSize));
    }
  };
  std::vector<double> x0;
  x0.reserve(replicas * kStateSize);
  for (std::size_t j = 0; j < replicas; ++j) {
    x0.insert(x0.end(), ps.x_eq.values.begin(), ps.x_eq.values.end());
  }
  Trajectory tr = integrate(f, x0, 0.0, ps.scenario.t_end, ps.scenario.integrator,
                            ps.scenario.sample_dt, ps.breakpoints);
  append_outputs(tr, u, set, replicas, true);
  return tr;
}

Trajectory run_aggregate(const PreparedScenario& ps, int n, const ParameterSet* aggregate) {
  const ParameterSet set =
      aggregate != nullptr ? *aggregate : scale_params(ps.single.params, ps.single.derived, n);
  const InputSignals u = scale_inputs(ps.inputs, n);
  return run_one(ps, set, u, lift_state(ps.x_eq, n));
}

Trajectory simulate_single(const TurbineParams& p, const ScenarioConfig& sc) {
  return run_single(prepare(p, sc));
}

Trajectory simulate_farm(const TurbineParams& p, const ScenarioConfig& sc) {
  return run_farm(prepare(p, sc), sc.n_turbines);
}

Trajectory simulate_aggregate(const TurbineParams& p, const ScenarioConfig& sc) {
  return run_aggregate(prepare(p, sc), sc.n_turbines);
}

}  // namespace windfarm
