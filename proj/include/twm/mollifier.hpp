#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "twm/afe.hpp"
#include "twm/arith.hpp"
#include "twm/dirichlet.hpp"
#include "twm/hecke.hpp"

namespace twm {

/// Block lengths ℓ_j, prime blocks P_j and the constants of the mollifier N(t,χ,α) = ∏_j E_{ℓ_j}(α P_j(t,χ)).
struct MollifierSpec {
  std::uint64_t q = 0;
  int N = 0, M = 0;  // 0 when built explicitly
  double k = 0.0;
  std::vector<unsigned> lengths;
  std::vector<double> upper_exponents;  // block j holds the odd primes in (q^{e_{j-1}}, q^{e_j}]
  std::vector<std::vector<std::uint64_t>> blocks;
  double c_k = 64.0;
  unsigned r_k = 2;
  bool degenerate = false;  // ℓ_1 <= 10^M: collapsed to a single block
};

/// ℓ_1 = 2⌈N log log q⌉, ℓ_{j+1} = 2⌈N log ℓ_j⌉ while ℓ_j > 10^M (stopping early if the sequence
/// stops decreasing); block j = odd primes in (q^{1/ℓ_{j-1}²}, q^{1/ℓ_j²}].
MollifierSpec build_spec(std::uint64_t q, int N, int M, double k, const MultiplicativeTables& tables);
/// Explicit lengths and block boundaries (exponents of q, increasing); for desk-scale q where the
/// defining recursion leaves every block empty.
MollifierSpec build_spec_explicit(std::uint64_t q, const std::vector<unsigned>& lengths,
                                  const std::vector<double>& upper_exponents, double k,
                                  const MultiplicativeTables& tables);

double mollifier_c(double k);
unsigned mollifier_r(double k);

/// E_ℓ(x) = Σ_{j<=ℓ} x^j / j!
std::complex<double> truncated_exponential(unsigned l, std::complex<double> x);

/// P_j(t,χ) = Σ_{p∈P_j} λ(p) χ(p) p^{-1/2-it}   (j is 1-based)
std::complex<double> block_polynomial(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group,
                                      const Character& chi, const CoefficientTable& coeffs);
/// N_j(t,χ,α) = E_{ℓ_j}(α P_j)
std::complex<double> block_mollifier(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group,
                                     const Character& chi, const CoefficientTable& coeffs, double alpha);
/// Q_j(t,χ,k) = (c_k P_j / ℓ_j)^{r_k ℓ_j} in log-polar form; Q_{R+1} = 1.
std::complex<double> block_q(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group,
                             const Character& chi, const CoefficientTable& coeffs);
/// N(t,χ,α) = ∏_j N_j(t,χ,α)
std::complex<double> mollifier_direct(const MollifierSpec& spec, double t, const CharacterGroup& group,
                                      const Character& chi, const CoefficientTable& coeffs, double alpha);

/// Sparse t-free coefficients with N(t,χ,α) = Σ_a x_a a^{-1/2-it} χ(a).
struct DirichletPolynomial {
  std::map<std::uint64_t, double> coefficients;
  double max_abs = 0.0;
  std::uint64_t max_support = 1;
};
DirichletPolynomial coefficient_expansion(const MollifierSpec& spec, double alpha, const CoefficientTable& coeffs,
                                          std::size_t support_budget = 2'000'000);
/// Σ_a x_a a^{-1/2-it} χ(a), or with χ̄ when conjugate (then N(-t, χ̄, α) is evaluate(poly, -t, χ, true)).
std::complex<double> evaluate_polynomial(const DirichletPolynomial& poly, double t, const CharacterGroup& group,
                                         const Character& chi, bool conjugate);

struct MollifiedFirstMoment {
  std::complex<double> lhs;
  std::complex<double> prediction;
  double relative_residual = 0.0;
  std::size_t support_x = 0, support_y = 0;
  std::uint64_t max_support = 0;  // largest a or b in the supports
  double max_coefficient = 0.0;   // max |x_a|, |y_b|
};
/// lhs = Σ*_χ L(1/2+it, f⊗χ) N(t,χ,k-1) N(-t,χ̄,k);
/// prediction = φ*(q) Σ_{(b,q)=1} (y_b/b) Σ_{am=b} λ(m) x_a.
MollifiedFirstMoment mollified_first_moment(double t, double k, const MollifierSpec& spec, const CharacterGroup& group,
                                            const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                                            const LValueOptions& options = {});
/// Σ*_χ |L(1/2+it)|² ∏_{j<=v} |N_j(t,χ,k-1)|² |Q_{v+1}(t,χ,k)|² (with_l), or the L-free
/// Σ*_χ ∏_{j<=v} |N_j(t,χ,k)|² |Q_{v+1}(t,χ,k)|².
double mollified_second_moment_terms(double t, double k, std::size_t v, const MollifierSpec& spec,
                                     const CharacterGroup& group, const CoefficientTable& coeffs, bool with_l,
                                     const LValueOptions& options = {});

}  // namespace twm
