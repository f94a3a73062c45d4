#include <benchmark/benchmark.h>

#include <cmath>

#include "cwphase/fourier_filter.hpp"
#include "cwphase/grid_filter.hpp"
#include "cwphase/measurement.hpp"
#include "cwphase/schemes.hpp"

using namespace cwphase;

namespace {

SimParams bench_params(int modes) {
  SimParams p;
  p.alpha_mag = 1.0;
  p.dt = 1e-3;
  p.n_modes = modes;
  return p;
}

void BM_KsHeterodyneStep(benchmark::State& state) {
  const SimParams p = bench_params(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  FourierFilterState f(p.n_modes);
  for (auto _ : state) {
    f = ks_step_heterodyne(std::move(f), sample_heterodyne(0.3, p, rng), p);
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KsHeterodyneStep)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_KsHomodyneStep(benchmark::State& state) {
  const SimParams p = bench_params(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  FourierFilterState f(p.n_modes);
  double lo = 1.0;
  for (auto _ : state) {
    f = ks_step_homodyne(std::move(f), sample_homodyne(0.3, lo, p, rng), lo, p);
    lo = estimate(f).phi_hat + 1.5707963267948966;
    benchmark::DoNotOptimize(f);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KsHomodyneStep)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_GridHeterodyneStep(benchmark::State& state) {
  const auto points = static_cast<std::size_t>(state.range(0));
  const SimParams p = bench_params(16);
  const GridDiffusion diffusion(points, p.kappa * p.dt);
  RngStream rng(1, 0);
  GridFilterState g = uniform_grid(points);
  for (auto _ : state) {
    const auto ll = heterodyne_log_likelihood(points, sample_heterodyne(0.3, p, rng), p);
    g = grid_bayes_step(std::move(g), ll, diffusion);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GridHeterodyneStep)->Arg(128)->Arg(512);

void BM_Trajectory(benchmark::State& state) {
  const auto kind = static_cast<SchemeKind>(state.range(0));
  SimParams p = bench_params(32);
  p.burn_in = 1.0;
  p.horizon = 10.0;
  TrajectoryOptions options;
  options.record = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(kind, p, 0, options));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.total_steps()));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Trajectory)
    ->Arg(static_cast<int>(SchemeKind::SimpleAdaptive))
    ->Arg(static_cast<int>(SchemeKind::BWAdaptive))
    ->Arg(static_cast<int>(SchemeKind::SemiOptimalAdaptive))
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
