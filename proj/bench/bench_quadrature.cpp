// Serial reference vs OpenMP kernel quadrature on the 1D example.
#include <benchmark/benchmark.h>

#include "gpx/evolution.hpp"
#include "gpx/kernel.hpp"
#include "gpx/moments.hpp"
#include "gpx/quadrature.hpp"

namespace {

struct Setup {
  gpx::QuadraticModel model;
  gpx::GridState psi;
  gpx::KernelContext ctx;
  std::vector<gpx::Axis> out;
};

Setup make_setup(std::size_t n) {
  gpx::Example1DParams p{1.0, 1.0, 1.0, 0.1, 0.5, 0.2, 0.1, 0.3};
  Setup s{gpx::make_example_1d(p, 0.5), {}, {}, {}};
  s.psi = gpx::gaussian_state({gpx::Axis{-16.0, 16.0, n}}, gpx::Vec::Constant(1, 1.0), gpx::Vec::Constant(1, 0.3),
                              gpx::Vec::Constant(1, 0.6), 1.0);
  const gpx::Constants k = gpx::constants_of_motion(s.model, s.psi);
  s.ctx = gpx::make_kernel_context(s.model, k.kappa_tilde, k.g, 0.0, 1.0);
  s.out = gpx::recentered(s.psi.axes, s.ctx.Xt);
  return s;
}

void run(benchmark::State& state, bool parallel) {
  const Setup s = make_setup(static_cast<std::size_t>(state.range(0)));
  gpx::QuadratureOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpx::apply_kernel(s.ctx, s.psi, s.out, opts));
  }
  state.SetComplexityN(state.range(0));
}

void BM_QuadratureSerial(benchmark::State& state) { run(state, false); }
void BM_QuadratureParallel(benchmark::State& state) { run(state, true); }

}  // namespace

BENCHMARK(BM_QuadratureSerial)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadratureParallel)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
