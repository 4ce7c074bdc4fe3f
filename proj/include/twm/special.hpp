#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "twm/arith.hpp"
#include "twm/hecke.hpp"
#include "twm/mellin.hpp"

namespace twm {

using Complex = std::complex<double>;

/// Principal branch of log Γ, by upward recurrence to Re s >= 15 and Stirling's series.
Complex log_gamma(Complex s);
Complex digamma(Complex s);

struct ZetaOptions {
  int cutoff = 0;  // Euler–Maclaurin split point N; 0 picks max(30, ⌈|s|⌉)
  int depth = 0;   // Bernoulli correction terms; 0 runs until terms fall below 1e-17 (max 30)
};
Complex zeta(Complex s, ZetaOptions options = {});

/// Central difference at steps h and h/2 combined by Richardson extrapolation.
struct DerivativeEstimate {
  Complex value;
  double step_difference = 0.0;  // |D(h) - D(h/2)|
};
DerivativeEstimate richardson_derivative(const std::function<Complex(Complex)>& f, Complex s, double h = 1e-3);

/// L(s, sym² f) through its own smoothed approximate functional equation
///   L(s) = Σ c_n n^{-s} V_s(n/X) + γ(1-s)/γ(s) Σ c_n n^{s-1} V_{1-s}(nX),
///   γ(s) = π^{-3s/2} Γ((s+1)/2) Γ((s+κ-1)/2) Γ((s+κ)/2),
/// with c_n = Σ_{d²|n} λ((n/d²)²).
class SymSquareL {
 public:
  SymSquareL(const CoefficientTable& coeffs, const MultiplicativeTables& tables, MellinOptions options = {2.0, 1.0 / 16, 0.0, 1e-20});

  struct Result {
    Complex value;
    std::uint64_t length_direct = 0;
    std::uint64_t length_dual = 0;
    double truncation_error = 0.0;
  };
  Result evaluate(Complex s, double balance = 1.0) const;
  Complex operator()(Complex s, double balance = 1.0) const { return evaluate(s, balance).value; }

  /// log γ(s), so Λ(s) = exp(log_gamma_factor(s)) L(s).
  Complex log_gamma_factor(Complex s) const;
  /// Σ_{n<=N} c_n n^{-s}, the absolutely convergent series for Re s > 1.
  Complex direct_series(Complex s, std::uint64_t n) const;
  double coefficient(std::uint64_t n) const { return c_[n]; }
  std::uint64_t depth() const { return c_.size() - 1; }

 private:
  std::vector<GammaFactor> factors(Complex s) const;
  int kappa_;
  MellinOptions options_;
  std::vector<double> c_;
};

struct SymSquareDerivative {
  double value_at_1;         // L(1, sym² f)
  double log_derivative;     // L'/L(1)
  double derivative;         // L'(1)
  double step_difference;    // certificate on L'(1)
};
SymSquareDerivative sym_square_L_derivative_ratio(const SymSquareL& sym2);

/// Which Euler factor H_p to build.
///   exact      — the local correction that makes φ*(q)/(b^{s1}a^{s2}) ζ(S) L(S,sym²) H(S) / ζ(2S) the
///                diagonal Σ_{(r,q)=1} λ(ar)λ(br) r^{-S}; the default.
///   as_printed — (1 - λ(p)² p^{-s}) · (1 - λ(p²) p^{-s} + λ(p²) p^{-2s} - p^{-3s}) [· j-sum], used
///                without the 1/ζ(2S).
enum class EulerFactorForm { exact, as_printed };
/// Index in the j-sum for p^l ∥ ab: λ(p^{l+j}) λ(p^j) p^{-js} (shifted_index) or λ(p^{l+js}) λ(p^{js}) p^{-js}
/// taken literally, which only makes sense when s is a positive integer.
enum class JSumReading { shifted_index, literal };

struct EulerFactorH {
  Complex s;
  std::uint64_t q = 1, a = 1, b = 1;
  std::vector<std::pair<std::uint64_t, Complex>> factors;
  Complex product{1.0, 0.0};
  int j_terms_max = 0;  // longest j-sum used
};

EulerFactorH euler_H(Complex s, std::uint64_t q, std::uint64_t a, std::uint64_t b, const CoefficientTable& coeffs,
                     const MultiplicativeTables& tables, EulerFactorForm form = EulerFactorForm::exact,
                     JSumReading reading = JSumReading::shifted_index);

struct EulerLogDerivative {
  double value_at_1;       // H(1)
  double log_derivative;   // H'/H(1)
  double derivative;       // H'(1)
  double step_difference;  // certificate on H'(1)
};
EulerLogDerivative euler_H_log_derivative(std::uint64_t q, std::uint64_t a, std::uint64_t b,
                                          const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                                          EulerFactorForm form = EulerFactorForm::exact);

}  // namespace twm
