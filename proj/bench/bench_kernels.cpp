// Serial reference path vs OpenMP path for each data-parallel kernel.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "slitwave/arrival.hpp"
#include "slitwave/propagation.hpp"
#include "slitwave/spectrum.hpp"

using namespace slitwave;

namespace {

const BeamParams beam(4.0 * pi * 1e10, 3.8189e-26);

const ApertureSpec& aperture() {
  static const auto ap = ApertureSpec::two_slit(1e-6, 0.25e-6, 8e-6);
  return ap;
}

const ComplexField& boundary() {
  static const auto b = build_aperture_function(aperture(), boundary_grid(aperture()));
  return b;
}

const MomentumSpectrum& full_spectrum() {
  static const auto s = momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, auto_momentum_grid(aperture()));
  return s;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_numeric_spectrum(benchmark::State& state) {
  const Grid1D kg = Grid1D::symmetric(2e10, 2e5);
  for (auto _ : state) benchmark::DoNotOptimize(momentum_amplitude_numeric(boundary(), kg, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(kg.count()));
}

void BM_angular_spectrum_far(benchmark::State& state) {
  const double y = 60.0;
  const auto xg = auto_x_grid(aperture(), beam, y);
  static const auto spec = [&] {
    const std::vector<double> ys{y};
    const std::vector<Grid1D> xgs{xg};
    return momentum_amplitude_analytic(1e-6, 0.25e-6, 8e-6, spectrum_grid_for_planes(aperture(), beam, ys, xgs));
  }();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_angular_spectrum(spec, beam, y, xg, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xg.count()));
}

void BM_fresnel_near(benchmark::State& state) {
  const double y = 1e-3;
  const auto xg = auto_x_grid(aperture(), beam, y);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_fresnel(boundary(), beam, y, xg, {}, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xg.count()));
}

void BM_kirchhoff_near(benchmark::State& state) {
  const double y = 5e-3;
  const Grid1D xg = Grid1D::symmetric(6e-6, 2e-8);
  const PropagationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(propagate_kirchhoff(boundary(), beam, cfg, y, xg, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xg.count()));
}

void BM_arrival_slitsum(benchmark::State& state) {
  const double y = 300.0;
  const auto xg = auto_x_grid(aperture(), beam, y, arrival_grid_options());
  const double t = y / beam.velocity();
  for (auto _ : state)
    benchmark::DoNotOptimize(arrival_density_slitsum(full_spectrum(), aperture(), beam, t, xg, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xg.count()));
}

}  // namespace

BENCHMARK(BM_numeric_spectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_angular_spectrum_far)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fresnel_near)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kirchhoff_near)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_arrival_slitsum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
