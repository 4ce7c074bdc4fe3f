// Serial reference vs OpenMP kernels; Arg(0) = serial, Arg(1) = parallel.
#include <benchmark/benchmark.h>

#include "twm/afe.hpp"
#include "twm/hecke.hpp"
#include "twm/kernels.hpp"

using namespace twm;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

const CoefficientTable& coeffs() {
  static const CoefficientTable c = build_delta_coefficients(100000);
  return c;
}

const CharacterGroup& group() {
  static const CharacterGroup g = build_group(809);
  return g;
}

void BM_WeightTable(benchmark::State& state) {
  const auto w = single_weight(0.0, 12, {2.0, 1.0 / 16, 0.0, 1e-20});
  for (auto _ : state) benchmark::DoNotOptimize(tabulate_weight(w, 1.0 / 809, 8000, mode(state)));
}
BENCHMARK(BM_WeightTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CharacterSums(benchmark::State& state) {
  std::vector<std::complex<double>> terms(8001);
  for (std::size_t n = 1; n < terms.size(); ++n) terms[n] = coeffs().lambda[n] / std::sqrt(double(n));
  const auto folded = fold_by_residue(terms, 809);
  for (auto _ : state)
    benchmark::DoNotOptimize(character_sums(group(), group().primitive_index, folded, false, mode(state)));
}
BENCHMARK(BM_CharacterSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GaussTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gauss_table(group(), group().primitive_index, 12, mode(state)));
}
BENCHMARK(BM_GaussTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LValueBatch(benchmark::State& state) {
  const auto gauss = gauss_table(group(), group().primitive_index, 12, Execution::serial);
  LValueOptions o;
  o.execution = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(LValueBatch(group(), coeffs(), {0.5, 0.0}, o).evaluate(group().primitive_index, gauss));
}
BENCHMARK(BM_LValueBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoefficientBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_delta_coefficients(state.range(0)));
}
BENCHMARK(BM_CoefficientBuild)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
