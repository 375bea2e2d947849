#include <benchmark/benchmark.h>

#include <random>

#include "xmrs/explain.hpp"
#include "xmrs/foil.hpp"
#include "xmrs/motion.hpp"
#include "xmrs/scenario.hpp"

using namespace xmrs;

namespace {

void BM_SolveEmergency(benchmark::State& state) {
  const ProblemDomain d = load_shipped_scenario("scenario-" + std::to_string(state.range(0))).presented;
  for (auto _ : state) benchmark::DoNotOptimize(solve(d));
}
BENCHMARK(BM_SolveEmergency)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_SolveDebrisSwap(benchmark::State& state) {
  const ProblemDomain d = debris_swap_speed_error().presented;
  for (auto _ : state) benchmark::DoNotOptimize(solve(d));
}
BENCHMARK(BM_SolveDebrisSwap)->Unit(benchmark::kMillisecond);

void BM_PlanPath(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridMap m;
  m.width = n;
  m.height = n;
  std::mt19937_64 rng(1);
  for (int y = 1; y < n - 1; ++y) {
    for (int x = 1; x < n - 1; ++x) {
      if (rng() % 4 == 0) m.blocked.push_back({x, y});
    }
  }
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(plan_path(m, {0, 0}, {n - 1, n - 1}));
    } catch (const NoPathError&) {
    }
  }
}
BENCHMARK(BM_PlanPath)->Arg(20)->Arg(60)->Arg(200);

void BM_ExplainPipeline(benchmark::State& state) {
  const ProblemDomain d = debris_swap_speed_error().presented;
  const Solution s = solve(d);
  const FoilQuery q{{{"ambulance", "D1", FoilOp::kUnassign}, {"dumptruck", "D1", FoilOp::kAssign}}};
  for (auto _ : state) {
    const FoilOutcome o = build_foil(d, s, q);
    const FactorSet f = filter_critical(compare_solutions(s, o.solution()), 0.1);
    benchmark::DoNotOptimize(explain(d, s, o, f));
  }
}
BENCHMARK(BM_ExplainPipeline)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
