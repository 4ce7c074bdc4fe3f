#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twm/afe.hpp"
#include "twm/arith.hpp"
#include "twm/dirichlet.hpp"
#include "twm/hecke.hpp"
#include "twm/special.hpp"

namespace twm {

/// Which hypothesis of the twisted second-moment asymptotic holds, with the slack it leaves.
///   (i)  a divisor q0 | q, q/q0 odd, q^η <= q0 <= q^{1/2-η}; (|s1|+1)(|s2|+1) <= q^{19η/5 - ε0}
///   (ii) q prime, η = 1/144; (|s1|+1)(|s2|+1) <= q^{1/4 - ε0}, max(a, b) <= q^{1/4}
struct ConditionFlags {
  std::uint64_t q0 = 1;
  double eta_i = 0.0;
  double epsilon0_i = 0.0;
  double epsilon0_ii = 0.0;
  bool condition_i = false;
  bool condition_ii = false;
  double error_scale_R = 0.0;  // the smaller 𝓡 among the conditions that hold; 0 if none
};

struct MomentTask {
  std::uint64_t q = 1, a = 1, b = 1;
  std::complex<double> s1{0.5, 0.0}, s2{0.5, 0.0};
  ConditionFlags conditions;
};

/// Validates q ≢ 2 (mod 4) and (a,b) = (ab,q) = 1; computes the condition flags.
MomentTask make_task(std::uint64_t q, std::uint64_t a, std::uint64_t b, std::complex<double> s1,
                     std::complex<double> s2, const MultiplicativeTables& tables);
/// The |L(1/2+it)|² specialization s1 = 1/2+it, s2 = 1/2-it.
MomentTask make_task(std::uint64_t q, std::uint64_t a, std::uint64_t b, double t, const MultiplicativeTables& tables);

enum class DerivativeInterpretation { log_derivative, raw };
const char* to_string(DerivativeInterpretation i);
const char* to_string(EulerFactorForm f);

/// Shared read-only inputs of the main-term evaluators.
struct MomentContext {
  const CoefficientTable& coeffs;
  const MultiplicativeTables& tables;
  const SymSquareL& sym2;
  EulerFactorForm form = EulerFactorForm::exact;
  LValueOptions lvalue{};
};

struct MainTerms {
  std::complex<double> term_1, term_2;
};

/// The two main terms; with the exact Euler form each carries the 1/ζ(2S) resp. 1/ζ(4-2S)
/// that the diagonal Dirichlet series needs.
MainTerms main_term_theorem(const MomentTask& task, const MomentContext& ctx);

/// The t2 -> -t1 limit of the two main terms, at s1 = 1/2+it, s2 = 1/2-it:
///   C · L(1)H(1)/ζ(2) · [2log(q/2π) + 2D_L + 2D_H - 4ζ'(2)/ζ(2) + 2γ + ψ(κ/2+it) + ψ(κ/2-it) - log(ab)]
/// with C = φ*(q)/(a^{1/2-it} b^{1/2+it}). With EulerFactorForm::as_printed the bracket and prefactor
/// are taken verbatim instead: C · L(1)H(1) · [2log(q/2π) + 2D_L + 2D_H + ψ(κ/2+it) + ψ(κ/2-it) - log(ab)].
/// (D_L, D_H) = (L'/L, H'/H) or (L', H') at 1 per the interpretation.
struct DiagonalLimit {
  std::complex<double> value;
  double sym2_derivative_certificate = 0.0;
  double euler_derivative_certificate = 0.0;
};
DiagonalLimit main_term_diagonal_limit(std::uint64_t q, double t, std::uint64_t a, std::uint64_t b,
                                       const MomentContext& ctx, DerivativeInterpretation interpretation);

struct BruteForceMoment {
  std::complex<double> value;
  double certified_error = 0.0;  // truncation and quadrature, propagated through the products
  std::uint64_t characters = 0;
  std::uint64_t length_1 = 0, length_2 = 0;
};
BruteForceMoment brute_force_twisted_moment(const MomentTask& task, const CharacterGroup& group,
                                            const CoefficientTable& coeffs, const LValueOptions& options = {});

struct MomentReport {
  std::uint64_t q = 0, a = 1, b = 1;
  std::complex<double> s1, s2;
  std::string form;  // "theorem" or "diagonal_limit"
  std::string euler_form;
  std::complex<double> lhs;
  std::complex<double> main_term_1, main_term_2, main_sum;
  double error_scale_R = 0.0;
  std::complex<double> residual;
  double relative_residual = 0.0;
  std::string interpretation;  // used for main_sum; "n/a" for the theorem form
  std::complex<double> alternate_main_sum;
  double alternate_relative_residual = 0.0;
  ConditionFlags conditions;
  std::uint64_t phi_star = 0;
  double lhs_certified_error = 0.0;
  std::uint64_t length_1 = 0, length_2 = 0;
  double derivative_certificate = 0.0;
};

/// Brute force plus the applicable main term: the diagonal limit when s1 + s2 = 1 with
/// s1 = 1/2+it, s2 = 1/2-it, the two-term formula otherwise.
MomentReport moment_compare(const MomentTask& task, const CharacterGroup& group, const MomentContext& ctx,
                            DerivativeInterpretation interpretation = DerivativeInterpretation::log_derivative);

struct ScanRow {
  std::uint64_t q = 0;
  std::string status;  // "ok" or the failure message
  std::optional<MomentReport> report;
};
std::vector<ScanRow> moment_scan(const std::vector<std::uint64_t>& q_list, double t, std::uint64_t a, std::uint64_t b,
                                 const MomentContext& ctx,
                                 DerivativeInterpretation interpretation = DerivativeInterpretation::log_derivative);

/// The interpretation whose |relative residual| is smaller at every row, if one is.
std::optional<DerivativeInterpretation> calibrate_interpretation(const std::vector<ScanRow>& rows);

struct KthMoment {
  std::uint64_t q = 0;
  double t = 0.0, k = 0.0;
  double sum = 0.0;
  double normalized = 0.0;  // sum / (φ*(q) (log q)^{k²})
  std::uint64_t phi_star = 0;
  double max_certified_error = 0.0;
};
KthMoment kth_moment_sum(std::uint64_t q, double t, double k, const CharacterGroup& group,
                         const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                         const LValueOptions& options = {});

}  // namespace twm
