#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "twm/dirichlet.hpp"
#include "twm/hecke.hpp"
#include "twm/kernels.hpp"
#include "twm/mellin.hpp"

namespace twm {

struct LValueOptions {
  double balance = 1.0;  // X
  // β = 0: the Γ factors alone give exponential decay, so both sums stay short
  MellinOptions weight{2.0, 1.0 / 16, 0.0, 1e-20};
  double tolerance = 1e-13;  // absolute target for each truncated tail
  bool fast_weights = false;
  std::size_t fast_points_per_octave = 64;
  Execution execution = Execution::parallel;
};

struct LValueResult {
  std::complex<double> s;
  std::uint32_t character = 0;
  std::complex<double> value;
  double balance = 1.0;
  std::uint64_t length_direct = 0;
  std::uint64_t length_dual = 0;
  double certified_error = 0.0;  // truncation tails of both sums
  double step_error = 0.0;       // Σ |coefficient| · |W_h - W_{h/2}|, plus the cache error if enabled
  bool accepted() const { return certified_error + step_error < 1e-8 * std::abs(value); }
};

/// L(s, f⊗χ) for every primitive χ mod q at one point s:
///   L = Σ λ(n)χ(n) n^{-s} V_s(n/(qX)) + ι_χ (q/2π)^{1-2s} Γ(g+1-s)/Γ(g+s) Σ λ(n)χ̄(n) n^{s-1} V_{1-s}(nX/q),
/// g = (κ-1)/2, V_s the weight with Γ(g+s+w)/Γ(g+s) and scale 2π. Both smoothed sums are folded by
/// residue class once, so each character costs O(q).
class LValueBatch {
 public:
  LValueBatch(const CharacterGroup& group, const CoefficientTable& coeffs, std::complex<double> s,
              LValueOptions options = {});

  /// Values in the order of `chars` (which must be primitive), using precomputed root numbers.
  std::vector<LValueResult> evaluate(const std::vector<std::uint32_t>& chars, const std::vector<GaussData>& gauss) const;

  std::complex<double> s() const { return s_; }
  std::complex<double> dual_prefactor() const { return prefactor_; }
  std::uint64_t length_direct() const { return n1_; }
  std::uint64_t length_dual() const { return n2_; }
  double certified_error() const { return tail_; }
  double step_error() const { return step_; }
  double cache_error() const { return cache_error_; }

 private:
  const CharacterGroup* group_;
  std::complex<double> s_;
  LValueOptions options_;
  std::complex<double> prefactor_;
  std::uint64_t n1_ = 0, n2_ = 0;
  double tail_ = 0.0, step_ = 0.0, cache_error_ = 0.0;
  std::vector<std::complex<double>> folded_direct_, folded_dual_;
};

/// Single L-value by the plain per-n loop (no folding); the serial reference for LValueBatch.
LValueResult l_value(std::complex<double> s, const CharacterGroup& group, const Character& chi,
                     const CoefficientTable& coeffs, const GaussData& gauss, LValueOptions options = {});

/// (q/2π)^{1-2s} Γ(g+1-s)/Γ(g+s)
std::complex<double> afe_dual_prefactor(std::complex<double> s, std::uint64_t q, int kappa);

/// L(s1, f⊗χ) L(s2, f⊗χ̄) from the double-sum form with the two-Γ weight 𝒲_{s1,s2}(mn/q²),
/// grouped by N = mn.
struct PairValue {
  std::complex<double> value;
  std::uint64_t length = 0;  // largest N = mn used in either sum
  double certified_error = 0.0;
};
PairValue l_pair_value(std::complex<double> s1, std::complex<double> s2, const CharacterGroup& group,
                       const Character& chi, const CoefficientTable& coeffs, const GaussData& gauss,
                       const GaussData& gauss_conjugate, MellinOptions weight = {2.0, 1.0 / 16, 0.0, 1e-20});

}  // namespace twm
