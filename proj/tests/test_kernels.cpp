#include <doctest.h>

#include "fixtures.hpp"
#include "twm/kernels.hpp"
#include "twm/parallel.hpp"

using namespace twm;

// Parallel kernels against their serial references: results must be bit-identical.
TEST_SUITE("kernels") {
  TEST_CASE("weight tabulation") {
    set_thread_count(4);
    const auto w = single_weight(0.3, 12, {2.0, 1.0 / 16, 0.0, 1e-20});
    const auto a = tabulate_weight(w, 1.0 / 211, 3000, Execution::serial);
    const auto b = tabulate_weight(w, 1.0 / 211, 3000, Execution::parallel);
    CHECK(a.value == b.value);
    CHECK(a.step_error == b.step_error);
    CHECK(a.value[5] == w(5.0 / 211));
  }

  TEST_CASE("character sums") {
    set_thread_count(4);
    const std::uint64_t q = 97;
    const auto g = build_group(q);
    std::vector<std::complex<double>> terms(2001);
    for (std::size_t n = 1; n < terms.size(); ++n) terms[n] = {test::delta().lambda[n] / double(n), 1.0 / (n + 3.0)};
    const auto folded = fold_by_residue(terms, q);
    for (const bool conj : {false, true}) {
      const auto a = character_sums(g, g.primitive_index, folded, conj, Execution::serial);
      const auto b = character_sums(g, g.primitive_index, folded, conj, Execution::parallel);
      CHECK(a == b);
      // against the unfolded direct sum
      for (std::size_t i = 0; i < g.primitive_index.size(); i += 13) {
        const auto& chi = g.characters[g.primitive_index[i]];
        std::complex<double> direct = 0.0;
        for (std::size_t n = 1; n < terms.size(); ++n) {
          const auto v = g.value(chi, n);
          direct += (conj ? std::conj(v) : v) * terms[n];
        }
        REQUIRE(std::abs(a[i] - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
      }
    }
  }

  TEST_CASE("Gauss tables") {
    set_thread_count(4);
    const auto g = build_group(225);
    const auto a = gauss_table(g, g.primitive_index, 12, Execution::serial);
    const auto b = gauss_table(g, g.primitive_index, 12, Execution::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].gauss_sum == b[i].gauss_sum);
      REQUIRE(a[i].root_number == b[i].root_number);
    }
  }
}
