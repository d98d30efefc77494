#include <benchmark/benchmark.h>

#include "metallic/connections.hpp"
#include "metallic/examples.hpp"
#include "metallic/lifts.hpp"

using namespace metallic;

namespace {

void BM_levi_civita(benchmark::State& state) {
  const ChartManifold m = load_example("E4");
  for (auto _ : state) {
    ChristoffelField gamma = levi_civita(m);
    benchmark::DoNotOptimize(gamma);
  }
}

void BM_natural_connection_check(benchmark::State& state) {
  const ChartManifold m = load_example("E4");
  const PointSample s = sample_points(m, 42, 200);
  for (auto _ : state) {
    auto reports = check_natural_connection(m, s, 1e-9);
    benchmark::DoNotOptimize(reports);
  }
}

void BM_build_tangent_lift(benchmark::State& state) {
  const ChartManifold m = load_example("E4");
  for (auto _ : state) {
    LiftedChart lift = build_tangent_lift(m);
    benchmark::DoNotOptimize(lift);
  }
}

void BM_lift_nijenhuis_tables(benchmark::State& state) {
  const ChartManifold m = load_example("E4");
  const LiftedChart lift = build_tangent_lift(m);
  const PointSample s = sample_points(lift.chart, 42, 50);
  for (auto _ : state) {
    LiftNijenhuisReports rep = check_nijenhuis_tables(lift, s, 1e-8);
    benchmark::DoNotOptimize(rep);
  }
}

}  // namespace

BENCHMARK(BM_levi_civita);
BENCHMARK(BM_natural_connection_check);
BENCHMARK(BM_build_tangent_lift);
BENCHMARK(BM_lift_nijenhuis_tables);

BENCHMARK_MAIN();
