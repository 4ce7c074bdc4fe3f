#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twm/dirichlet.hpp"
#include "twm/mellin.hpp"

namespace twm {

// Data-parallel inner loops. Each has an OpenMP version and a serial reference; the two
// produce bit-identical output because every parallel iteration writes its own slot and all
// reductions happen afterwards in a fixed order.

enum class Execution { serial, parallel };

/// W(n·scale) for n = 1..count (index 0 unused), with the quadrature step certificates.
struct WeightTable {
  std::vector<std::complex<double>> value;
  std::vector<double> step_error;
};
WeightTable tabulate_weight(const MellinWeight& weight, double scale, std::uint64_t count, Execution mode);

/// F_r = Σ_{n ≡ r (mod q), 1<=n<=N} terms[n]  (compensated, increasing n)
std::vector<std::complex<double>> fold_by_residue(const std::vector<std::complex<double>>& terms, std::uint64_t q);

/// Σ_r χ(r) F_r (or χ̄(r) F_r when conjugate) for each listed character.
std::vector<std::complex<double>> character_sums(const CharacterGroup& group, const std::vector<std::uint32_t>& chars,
                                                 const std::vector<std::complex<double>>& folded, bool conjugate,
                                                 Execution mode);

/// Gauss sums and root numbers of the listed (primitive) characters.
std::vector<GaussData> gauss_table(const CharacterGroup& group, const std::vector<std::uint32_t>& chars, int kappa,
                                   Execution mode);

}  // namespace twm
