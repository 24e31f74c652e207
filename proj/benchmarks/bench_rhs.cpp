#include <benchmark/benchmark.h>

#include "windfarm/aggregation.hpp"
#include "windfarm/model.hpp"
#include "windfarm/scenario.hpp"

namespace {

using namespace windfarm;

struct Fixture {
  TurbineParams p = default_params();
  DerivedParams d = derive(p);
  InputSignals u = build_inputs(reference_scenario(), p.omega_nom);
  State x = [] {
    State s;
    s[Var::omega_r] = 0.7;
    s[Var::omega_t] = 0.7;
    s[Var::i_s_q] = 0.4;
    s[Var::e_s_q] = 1.0;
    return s;
  }();
};

void BM_Inputs(benchmark::State& state) {
  Fixture f;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.u.at(t));
    t += 1e-4;
  }
}
BENCHMARK(BM_Inputs);

void BM_Rhs(benchmark::State& state) {
  Fixture f;
  const InputSample s = f.u.at(1.0);
  State dx;
  for (auto _ : state) {
    rhs_into(f.x.span(), s, f.p, f.d, dx.span());
    benchmark::DoNotOptimize(dx);
  }
}
BENCHMARK(BM_Rhs);

void BM_RhsAggregate(benchmark::State& state) {
  Fixture f;
  const auto n = static_cast<int>(state.range(0));
  const ParameterSet agg = scale_params(f.p, f.d, n);
  const InputSample s = scale_inputs(f.u.at(1.0), n);
  const State x = lift_state(f.x, n);
  State dx;
  for (auto _ : state) {
    rhs_into(x.span(), s, agg.params, agg.derived, dx.span());
    benchmark::DoNotOptimize(dx);
  }
}
BENCHMARK(BM_RhsAggregate)->Arg(8);

}  // namespace
