#include <benchmark/benchmark.h>

#include <cmath>
#include <symtherm/symtherm.hpp>

using namespace symtherm;

namespace {

Potential bin14() { return Potential::symbolwise(Sft::full(2), {std::log(0.25), std::log(0.75)}); }

// depth-d potential on the full shift over n symbols with deterministic values
Potential busy(int n, int depth) {
  int k = 0;
  return Potential::tabulate(Sft::full(n), depth, [&](WordView) { return std::sin(++k * 0.7); });
}

void BM_pressure(benchmark::State& st) {
  const Potential f = busy(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(pressure(f));
}
BENCHMARK(BM_pressure)->Args({2, 1})->Args({3, 3})->Args({4, 4})->Args({2, 8});

void BM_beta(benchmark::State& st) {
  const Potential phi = bin14(), psi = Potential::constant(Sft::full(2), std::log(2.0));
  for (auto _ : st) benchmark::DoNotOptimize(beta(1.5, phi, psi));
}
BENCHMARK(BM_beta);

void BM_cdf_eval(benchmark::State& st) {
  const AffineIfs ifs(Sft::full(2), {0.0, 1.0}, {{0.5, 0.0}, {0.5, 0.5}});
  const CdfModel m(ifs, bin14());
  const double eps = std::pow(10.0, -static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(cdf_eval(m, 1.0 / 3, eps));
}
BENCHMARK(BM_cdf_eval)->Arg(6)->Arg(9)->Arg(12);

void BM_enumerate_W(benchmark::State& st) {
  const Potential phi = Potential::symbolwise(Sft::full(2), {-0.5, 0.5});
  const int m = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_W(phi, 2.0, m).words.size());
}
BENCHMARK(BM_enumerate_W)->Arg(8)->Arg(12)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
