// Serial reference paths against their OpenMP counterparts, and the variance
// of antithetic Halton sampling against independent sampling.

#include <benchmark/benchmark.h>

#include "mahler/alpha.hpp"
#include "mahler/bodynd.hpp"
#include "mahler/localize.hpp"

using namespace mahler;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_ThetaSweep(benchmark::State& state) {
  const auto s = random_shell_body(6, ShellConstraint::for_exponent(4), 3);
  AlphaOptions opt;
  opt.interval_grid = 32;
  opt.refine_starts = 4;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(theta_sweep(4, s, 16, opt));
}
BENCHMARK(BM_ThetaSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_MahlerProduct(benchmark::State& state) {
  const BodyND k = cube(5);
  const auto sample = SphereSample::halton(5, 200000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mahler_product(k, sample, exec_of(state)));
}
BENCHMARK(BM_MahlerProduct)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_RegionMasses(benchmark::State& state) {
  const MahlerG g = mahler_g(cube(3));
  const auto gf = GridFunctions::sample(g.g1, g.g2, IcosaGrid::shared());
  const SphericalRegion r = SphericalRegion{}.with_cut(Vec3(1, 2, 3).normalized()).with_cut(Vec3(-1, 0, 1).normalized());
  for (auto _ : state) benchmark::DoNotOptimize(region_masses(gf, r, exec_of(state)));
}
BENCHMARK(BM_RegionMasses)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMicrosecond);

// Standard error per sample budget; the pairing only helps bodies whose
// radial function is not even, so symmetric bodies show the plain rate.
// The reported se assumes independent pairs, so it says nothing about the
// quasi-random route; compare the actual error against the known volume.
void BM_SamplingError(benchmark::State& state) {
  const Eigen::MatrixXd map = random_linear_map(4, 3.0, 5);
  const BodyND k = transform(cube(4), map);
  const double exact = 16.0 * std::abs(map.determinant());
  const std::size_t count = 20000;
  constexpr int kSeeds = 8;
  double rms = 0.0;
  for (auto _ : state) {
    double sq = 0.0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
      const auto sample = state.range(0) == 0 ? SphereSample::independent(4, count, seed)
                                              : SphereSample::halton(4, count, seed);
      const double err = volume_radial_mc(k, sample).value / exact - 1.0;
      sq += err * err;
    }
    rms = std::sqrt(sq / kSeeds);
  }
  state.counters["rms_relative_error"] = rms;
}
BENCHMARK(BM_SamplingError)->Arg(0)->Arg(1)->ArgName("halton")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
