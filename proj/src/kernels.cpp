#include "twm/kernels.hpp"

#include <omp.h>

#include "twm/parallel.hpp"
#include "twm/summation.hpp"

namespace twm {

WeightTable tabulate_weight(const MellinWeight& weight, double scale, std::uint64_t count, Execution mode) {
  WeightTable t;
  t.value.assign(count + 1, {});
  t.step_error.assign(count + 1, 0.0);
  const auto n_max = static_cast<std::int64_t>(count);
  if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 256) num_threads(thread_count())
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const WeightValue v = weight.evaluate(static_cast<double>(n) * scale);
      t.value[n] = v.value;
      t.step_error[n] = v.step_error;
    }
  } else {
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const WeightValue v = weight.evaluate(static_cast<double>(n) * scale);
      t.value[n] = v.value;
      t.step_error[n] = v.step_error;
    }
  }
  return t;
}

std::vector<std::complex<double>> fold_by_residue(const std::vector<std::complex<double>>& terms, std::uint64_t q) {
  std::vector<CompensatedComplexSum> acc(q);
  for (std::uint64_t n = 1; n < terms.size(); ++n) acc[n % q].add(terms[n]);
  std::vector<std::complex<double>> out(q);
  for (std::uint64_t r = 0; r < q; ++r) out[r] = acc[r].value();
  return out;
}

namespace {

std::complex<double> one_character_sum(const CharacterGroup& group, const Character& chi,
                                       const std::vector<std::complex<double>>& folded, bool conjugate) {
  CompensatedComplexSum sum;
  const std::uint64_t lambda = group.exponent;
  for (std::uint64_t r = 0; r < group.q; ++r) {
    const std::int64_t k = group.angle(chi, r);
    if (k < 0) continue;
    const auto kk = static_cast<std::uint64_t>(k);
    sum.add(group.root(conjugate ? (lambda - kk) % lambda : kk) * folded[r]);
  }
  return sum.value();
}

}  // namespace

std::vector<std::complex<double>> character_sums(const CharacterGroup& group, const std::vector<std::uint32_t>& chars,
                                                 const std::vector<std::complex<double>>& folded, bool conjugate,
                                                 Execution mode) {
  std::vector<std::complex<double>> out(chars.size());
  const auto count = static_cast<std::int64_t>(chars.size());
  if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (std::int64_t i = 0; i < count; ++i)
      out[i] = one_character_sum(group, group.characters[chars[i]], folded, conjugate);
  } else {
    for (std::int64_t i = 0; i < count; ++i)
      out[i] = one_character_sum(group, group.characters[chars[i]], folded, conjugate);
  }
  return out;
}

std::vector<GaussData> gauss_table(const CharacterGroup& group, const std::vector<std::uint32_t>& chars, int kappa,
                                   Execution mode) {
  std::vector<GaussData> out(chars.size());
  const auto count = static_cast<std::int64_t>(chars.size());
  if (mode == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (std::int64_t i = 0; i < count; ++i) out[i] = gauss_root_data(group, group.characters[chars[i]], kappa);
  } else {
    for (std::int64_t i = 0; i < count; ++i) out[i] = gauss_root_data(group, group.characters[chars[i]], kappa);
  }
  return out;
}

}  // namespace twm
