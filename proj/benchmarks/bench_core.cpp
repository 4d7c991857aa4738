#include <benchmark/benchmark.h>

#include "kerrtrack/cubic.hpp"
#include "kerrtrack/dynamics.hpp"
#include "kerrtrack/portrait.hpp"
#include "kerrtrack/simulation.hpp"
#include "kerrtrack/tracking.hpp"

using namespace kerrtrack;

static void BM_CubicRoots(benchmark::State& state) {
  const Cubic c = {-0.09, 0.73, -1.6, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(real_cubic_roots(c));
}
BENCHMARK(BM_CubicRoots);

static void BM_FixedPoints(benchmark::State& state) {
  const PortraitParams p{1.0, -1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(fixed_points_at(p));
}
BENCHMARK(BM_FixedPoints);

static void BM_SeparatrixTrace(benchmark::State& state) {
  const PortraitParams p{1.0, 0.0, 0.0};
  FixedPoint top;
  for (const auto& fp : fixed_points_at(p)) {
    if (fp.kind == FixedPointKind::pole_p1) top = fp;
  }
  for (auto _ : state) benchmark::DoNotOptimize(trace_separatrix(top, p, 2000));
}
BENCHMARK(BM_SeparatrixTrace);

// Full tracked run on the default 2001-point grid.
static void BM_TrackedRun(benchmark::State& state) {
  const auto rep = state.range(0) == 0 ? Representation::amplitude : Representation::reduced;
  const auto sc = TrackingScenario::canonical(Sector::alphaPi, 2.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_tracked(sc, rep).final_population());
}
BENCHMARK(BM_TrackedRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ScanCrossings(benchmark::State& state) {
  const auto sc = TrackingScenario::canonical(Sector::alpha0, 2.0, 5.0);
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_crossings(sc, samples));
}
BENCHMARK(BM_ScanCrossings)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
