#include <benchmark/benchmark.h>

#include "qpm/constants.hpp"
#include "qpm/crystal.hpp"
#include "qpm/orbit.hpp"
#include "qpm/transport.hpp"

namespace {

qpm::crystal::UnitCell npp_cell() {
  qpm::crystal::UnitCell cell;
  cell.a_angstrom = 5.261;
  cell.b_angstrom = 14.908;
  cell.c_angstrom = 7.185;
  cell.beta_deg = 105.18;
  cell.molecules_per_cell = 2;
  cell.transparency_window_um = {0.5, 2.0};
  return cell;
}

constexpr qpm::orbit::OrbitShape kShape{0.26, 1.4, 3.9};

void bm_layer_delay(benchmark::State& state) {
  const double nu = qpm::kCodata.c0 / 633e-9;
  double theta = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::transport::layer_delay(theta, kShape, nu));
    theta += 1e-3;
    if (theta > 6.28) theta = 0.05;
  }
}
BENCHMARK(bm_layer_delay);

void bm_sample_trial_sums(benchmark::State& state) {
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  const long layers = qpm::crystal::build_stack(npp_cell(), 1.0).layer_count;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qpm::transport::sample_trial_sums(kShape, 1, trials, layers, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials) *
                          layers);
}
BENCHMARK(bm_sample_trial_sums)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_full_run(benchmark::State& state) {
  qpm::transport::SimulationConfig cfg;
  cfg.trials = static_cast<std::uint64_t>(state.range(0));
  cfg.seed = 1;
  cfg.beam = {633.0, 10.0, 20.0};
  cfg.stack = qpm::crystal::build_stack(npp_cell(), 1.0);
  cfg.shape = kShape;
  cfg.homo_lumo_gap_ev = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpm::transport::run(cfg));
  }
}
BENCHMARK(bm_full_run)->Arg(500)->Unit(benchmark::kMillisecond);

} // namespace
