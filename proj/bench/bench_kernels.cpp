#include "deconv/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace deconv::kernels;

namespace {

std::vector<cplx> random_cplx(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v)
    x = {U(rng), U(rng)};
  return v;
}

std::vector<double> uniform_doubles(std::size_t n, double lo, double hi, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v)
    x = U(rng);
  return v;
}

std::vector<double> grid(std::size_t n, double lo, double hi)
{
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return g;
}

template <auto Kernel>
void BM_conv(benchmark::State& state)
{
  const auto n = std::size_t(state.range(0));
  auto a = random_cplx(n, 1), b = random_cplx(n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(Kernel(a, b));
  state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void BM_step_sum(benchmark::State& state)
{
  const auto n = std::size_t(state.range(0));
  auto table = uniform_doubles(64, -2.0, 2.0, 3);
  auto obs = uniform_doubles(n, 0.0, 10.0, 4);
  auto g = grid(256, -1.0, 12.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(Kernel(table, obs, g, 0.0, 1.0));
}

template <auto Kernel>
void BM_mixture_cdf(benchmark::State& state)
{
  const auto n = std::size_t(state.range(0));
  std::vector<NormalComponent> comps;
  auto means = uniform_doubles(n, -3.0, 3.0, 5);
  for (std::size_t k = 0; k < n; ++k)
    comps.push_back({(k % 2 ? -1.0L : 1.0L) / (long double)n, means[k], 0.25L + (long double)(k % 7)});
  auto g = grid(161, -4.0, 4.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(Kernel(comps, g));
}

} // namespace

BENCHMARK(BM_conv<conv_serial>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_conv<conv_omp>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_step_sum<step_sum_serial>)->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_step_sum<step_sum_omp>)->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_mixture_cdf<mixture_cdf_serial>)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_mixture_cdf<mixture_cdf_omp>)->RangeMultiplier(4)->Range(16, 4096);

BENCHMARK_MAIN();
