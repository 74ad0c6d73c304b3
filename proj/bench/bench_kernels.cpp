// OpenMP kernels against their serial reference.
#include <benchmark/benchmark.h>

#include "qsing/field_io.hpp"
#include "qsing/frequency.hpp"
#include "qsing/oracle.hpp"

using namespace qsing;

namespace {

AnalyticField builtin(const char* name) {
  return load_field(std::string(QSING_DATA_DIR) + "/" + name + ".json");
}
AnalyticField mixed() { return builtin("mixed"); }
AnalyticField cylinder() { return builtin("cylinder"); }

QuadratureScheme scheme(ExecutionPolicy p, SpatialMethod method = SpatialMethod::SlabReduction) {
  QuadratureScheme q;
  q.policy = p;
  q.method = method;
  return q;
}

void frequency(benchmark::State& state, const AnalyticField& f, const Point& x,
               const QuadratureScheme& q) {
  const auto phi = WeightProfile::standard();
  for (auto _ : state) benchmark::DoNotOptimize(frequency_I(f, phi, x, 0.5, q).I);
}

void BM_PlanarSerial(benchmark::State& s) {
  frequency(s, mixed(), {0.05, 0.02}, scheme(ExecutionPolicy::Serial));
}
void BM_PlanarParallel(benchmark::State& s) {
  frequency(s, mixed(), {0.05, 0.02}, scheme(ExecutionPolicy::Parallel));
}
void BM_SlabSerial(benchmark::State& s) {
  frequency(s, cylinder(), {0.05, 0.0, 0.1}, scheme(ExecutionPolicy::Serial));
}
void BM_SlabParallel(benchmark::State& s) {
  frequency(s, cylinder(), {0.05, 0.0, 0.1}, scheme(ExecutionPolicy::Parallel));
}
void BM_QmcSerial(benchmark::State& s) {
  frequency(s, cylinder(), {0.05, 0.0, 0.1}, scheme(ExecutionPolicy::Serial, SpatialMethod::QuasiMonteCarlo));
}
void BM_QmcParallel(benchmark::State& s) {
  frequency(s, cylinder(), {0.05, 0.0, 0.1}, scheme(ExecutionPolicy::Parallel, SpatialMethod::QuasiMonteCarlo));
}

std::vector<Point> batch() {
  std::vector<Point> ys;
  for (int i = 0; i < 32; ++i) ys.push_back({-0.2 + 0.4 * i / 31.0, 0.01});
  return ys;
}

void BM_OracleSerial(benchmark::State& state) {
  const FunctionOracle o([f = mixed(), phi = WeightProfile::standard()](const Point& y, double r) {
    return frequency_I(f, phi, y, r, scheme(ExecutionPolicy::Serial)).I;
  });
  const auto ys = batch();
  for (auto _ : state)
    for (const auto& y : ys) benchmark::DoNotOptimize(o.frequency(y, 0.3));
}
void BM_OracleParallel(benchmark::State& state) {
  const FunctionOracle o([f = mixed(), phi = WeightProfile::standard()](const Point& y, double r) {
    return frequency_I(f, phi, y, r, scheme(ExecutionPolicy::Serial)).I;
  });
  const auto ys = batch();
  for (auto _ : state) benchmark::DoNotOptimize(o.frequencies(ys, 0.3));
}

} // namespace

BENCHMARK(BM_PlanarSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanarParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlabSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlabParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QmcSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QmcParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
