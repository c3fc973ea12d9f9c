#include <benchmark/benchmark.h>

#include <random>

#include "nodal/extremal.hpp"
#include "nodal/metrics.hpp"
#include "nodal/nadirashvili.hpp"
#include "nodal/schrodinger.hpp"
#include "nodal/series.hpp"
#include "nodal/sphere.hpp"

using namespace nodal;

namespace {

CoefficientSeries random_series(int degree) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<cplx> a(degree + 1);
  for (int n = 1; n <= degree; ++n) a[n] = {g(rng), g(rng)};
  return {a, 1.0};
}

Candidate random_candidate(int n_max) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  auto c = Candidate::monomial(1, n_max);
  for (int n = 0; n < n_max; ++n) {
    c.p[n] = g(rng);
    c.q[n] = g(rng);
  }
  return c;
}

}  // namespace

static void BM_EvalSeries(benchmark::State& state) {
  const auto s = random_series(static_cast<int>(state.range(0)));
  const cplx z(0.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(eval_series(s, z));
}
BENCHMARK(BM_EvalSeries)->Arg(32)->Arg(512);

static void BM_SignChanges(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  const auto s = random_series(deg);
  RealField f = [&](std::complex<double> z) { return s.real_part(z); };
  for (auto _ : state) benchmark::DoNotOptimize(sign_changes_on_circle(f, 0.0, 1.0, deg));
}
BENCHMARK(BM_SignChanges)->Arg(16)->Arg(128);

static void BM_PositivityArea(benchmark::State& state) {
  const auto s = random_series(32);
  RealField f = [&](std::complex<double> z) { return s.real_part(z); };
  AreaOptions opt;
  opt.budget = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(positivity_area(f, Disc(0.0, 1.0), opt));
}
BENCHMARK(BM_PositivityArea)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

static void BM_PolarFftArea(benchmark::State& state) {
  const auto c = random_candidate(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polar_fft_area(c, 48));
}
BENCHMARK(BM_PolarFftArea)->Arg(8)->Arg(64)->Arg(512);

static void BM_GreenApply(benchmark::State& state) {
  const GreenSolver G;
  const auto g = PolarField::from_function([](std::complex<double> z) { return 1.0 + z.real() * z.imag(); }, G.grid());
  for (auto _ : state) benchmark::DoNotOptimize(G.apply(g));
}
BENCHMARK(BM_GreenApply)->Unit(benchmark::kMillisecond);

static void BM_SampleSphere(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto f = random_eigenfunction(N, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_sphere(f, {256, 512}));
}
BENCHMARK(BM_SampleSphere)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_EvalE(benchmark::State& state) {
  static const EntireE E;
  const std::complex<double> z(0.7, 1.9);
  for (auto _ : state) benchmark::DoNotOptimize(eval_E(E, z));
}
BENCHMARK(BM_EvalE)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
