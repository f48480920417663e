#include <benchmark/benchmark.h>

#include "qpm/orbit.hpp"
#include "qpm/rng.hpp"

namespace {

void bm_kepler_time_fraction(benchmark::State& state) {
  const double ecc = state.range(0) / 100.0;
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::orbit::kepler_time_fraction(theta, ecc));
    theta += 1e-3;
    if (theta > 6.28) theta = 0.1;
  }
}
BENCHMARK(bm_kepler_time_fraction)->Arg(0)->Arg(26)->Arg(90);

void bm_solve_eccentric_anomaly(benchmark::State& state) {
  const double ecc = state.range(0) / 100.0;
  std::uint64_t i = 0;
  for (auto _ : state) {
    const double m = 6.283185307179586 * qpm::rng::uniform_draw(1, i++, 0);
    benchmark::DoNotOptimize(qpm::orbit::solve_eccentric_anomaly(m, ecc));
  }
}
BENCHMARK(bm_solve_eccentric_anomaly)->Arg(0)->Arg(26)->Arg(90);

void bm_sample_anomaly(benchmark::State& state) {
  const double ecc = state.range(0) / 100.0;
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qpm::orbit::sample_anomaly(ecc, qpm::rng::uniform_draw(2, i++, 0)));
  }
}
BENCHMARK(bm_sample_anomaly)->Arg(26)->Arg(90);

} // namespace

BENCHMARK_MAIN();
