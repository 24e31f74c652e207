#include <benchmark/benchmark.h>

#include "windfarm/simulation.hpp"

namespace {

using namespace windfarm;

const PreparedScenario& prepared() {
  static const PreparedScenario ps = prepare(default_params(), reference_scenario());
  return ps;
}

void BM_Farm(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const Trajectory tr = run_farm(prepared(), n);
    state.counters["rhs_evals"] = static_cast<double>(tr.stats.rhs_evaluations);
  }
}
BENCHMARK(BM_Farm)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const Trajectory tr = run_aggregate(prepared(), n);
    state.counters["rhs_evals"] = static_cast<double>(tr.stats.rhs_evaluations);
  }
}
BENCHMARK(BM_Aggregate)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
