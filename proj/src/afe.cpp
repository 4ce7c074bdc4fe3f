#include "twm/afe.hpp"

#include <cmath>
#include <numbers>

#include "twm/error.hpp"
#include "twm/special.hpp"
#include "twm/summation.hpp"

namespace twm {
namespace {

MellinWeight l_weight(Complex s, int kappa, const MellinOptions& options) {
  const double g = (kappa - 1) / 2.0;
  return MellinWeight({{g + s, 1.0}}, std::log(2 * std::numbers::pi), options);
}

void require_depth(const CoefficientTable& coeffs, std::uint64_t n, const char* who) {
  if (n > coeffs.limit)
    throw CapabilityError(std::string(who) + ": needs coefficients up to n = " + std::to_string(n), n);
}

Complex n_power(std::uint64_t n, Complex s) { return std::exp(-s * std::log(static_cast<double>(n))); }

}  // namespace

Complex afe_dual_prefactor(Complex s, std::uint64_t q, int kappa) {
  const double g = (kappa - 1) / 2.0;
  const double log_conductor = std::log(static_cast<double>(q) / (2 * std::numbers::pi));
  return std::exp((1.0 - 2.0 * s) * log_conductor + log_gamma(g + 1.0 - s) - log_gamma(g + s));
}

LValueBatch::LValueBatch(const CharacterGroup& group, const CoefficientTable& coeffs, Complex s, LValueOptions options)
    : group_(&group), s_(s), options_(options) {
  if (!group.has_primitive()) throw PreconditionError("l_value: q ≡ 2 (mod 4) has no primitive characters");
  if (!(options.balance > 0.0)) throw PreconditionError("l_value: balance X must be positive");
  const double q = static_cast<double>(group.q);
  const double sigma = s.real();
  const MellinWeight direct = l_weight(s, coeffs.kappa, options.weight);
  const MellinWeight dual = l_weight(1.0 - s, coeffs.kappa, options.weight);
  prefactor_ = afe_dual_prefactor(s, group.q, coeffs.kappa);
  const double p_abs = std::abs(prefactor_);

  const double y1 = q * options.balance;
  const double y2 = q / options.balance;
  n1_ = direct.truncation_length(sigma, y1, 1, options.tolerance);
  n2_ = dual.truncation_length(1.0 - sigma, y2, 1, options.tolerance / std::max(p_abs, 1e-300));
  require_depth(coeffs, std::max(n1_, n2_), "l_value");
  tail_ = direct.tail_bound(sigma, y1, n1_, 1) + p_abs * dual.tail_bound(1.0 - sigma, y2, n2_, 1);

  auto terms = [&](const MellinWeight& w, double y, std::uint64_t n_max, Complex exponent, double scale_abs) {
    WeightTable table;
    if (options.fast_weights) {
      const CachedWeight cache(w, 1.0 / y, static_cast<double>(n_max) / y, options.fast_points_per_octave);
      table.value.assign(n_max + 1, {});
      table.step_error.assign(n_max + 1, cache.measured_error());
      for (std::uint64_t n = 1; n <= n_max; ++n) table.value[n] = cache(static_cast<double>(n) / y);
      cache_error_ = std::max(cache_error_, cache.measured_error());
    } else {
      table = tabulate_weight(w, 1.0 / y, n_max, options.execution);
    }
    std::vector<Complex> out(n_max + 1);
    CompensatedSum step;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const Complex c = coeffs.lambda[n] * n_power(n, exponent);
      out[n] = c * table.value[n];
      step.add(scale_abs * std::abs(c) * table.step_error[n]);
    }
    step_ += step.value();
    return out;
  };
  folded_direct_ = fold_by_residue(terms(direct, y1, n1_, s, 1.0), group.q);
  folded_dual_ = fold_by_residue(terms(dual, y2, n2_, 1.0 - s, p_abs), group.q);
}

std::vector<LValueResult> LValueBatch::evaluate(const std::vector<std::uint32_t>& chars,
                                                const std::vector<GaussData>& gauss) const {
  if (gauss.size() != chars.size()) throw PreconditionError("LValueBatch: one GaussData per character required");
  for (const std::uint32_t i : chars)
    if (group_->characters[i].conductor != group_->q) throw PreconditionError("l_value: character is not primitive");
  const auto first = character_sums(*group_, chars, folded_direct_, false, options_.execution);
  const auto second = character_sums(*group_, chars, folded_dual_, true, options_.execution);
  std::vector<LValueResult> out(chars.size());
  for (std::size_t i = 0; i < chars.size(); ++i) {
    LValueResult& r = out[i];
    r.s = s_;
    r.character = chars[i];
    r.value = first[i] + gauss[i].root_number * prefactor_ * second[i];
    r.balance = options_.balance;
    r.length_direct = n1_;
    r.length_dual = n2_;
    r.certified_error = tail_;
    r.step_error = step_ + cache_error_;
  }
  return out;
}

LValueResult l_value(Complex s, const CharacterGroup& group, const Character& chi, const CoefficientTable& coeffs,
                     const GaussData& gauss, LValueOptions options) {
  if (chi.conductor != group.q) throw PreconditionError("l_value: character is not primitive");
  if (!(options.balance > 0.0)) throw PreconditionError("l_value: balance X must be positive");
  const double q = static_cast<double>(group.q);
  const double sigma = s.real();
  const MellinWeight direct = l_weight(s, coeffs.kappa, options.weight);
  const MellinWeight dual = l_weight(1.0 - s, coeffs.kappa, options.weight);
  const Complex prefactor = afe_dual_prefactor(s, group.q, coeffs.kappa);
  const double p_abs = std::abs(prefactor);
  const double y1 = q * options.balance;
  const double y2 = q / options.balance;

  LValueResult r;
  r.s = s;
  r.character = chi.index;
  r.balance = options.balance;
  r.length_direct = direct.truncation_length(sigma, y1, 1, options.tolerance);
  r.length_dual = dual.truncation_length(1.0 - sigma, y2, 1, options.tolerance / std::max(p_abs, 1e-300));
  require_depth(coeffs, std::max(r.length_direct, r.length_dual), "l_value");

  CompensatedComplexSum first, second;
  CompensatedSum step;
  for (std::uint64_t n = 1; n <= r.length_direct; ++n) {
    const Complex x = group.value(chi, n);
    if (x == Complex{}) continue;
    const WeightValue w = direct.evaluate(n / y1);
    const Complex c = coeffs.lambda[n] * n_power(n, s);
    first.add(c * x * w.value);
    step.add(std::abs(c) * w.step_error);
  }
  for (std::uint64_t n = 1; n <= r.length_dual; ++n) {
    const Complex x = std::conj(group.value(chi, n));
    if (x == Complex{}) continue;
    const WeightValue w = dual.evaluate(n / y2);
    const Complex c = coeffs.lambda[n] * n_power(n, 1.0 - s);
    second.add(c * x * w.value);
    step.add(p_abs * std::abs(c) * w.step_error);
  }
  r.value = first.value() + gauss.root_number * prefactor * second.value();
  r.certified_error = direct.tail_bound(sigma, y1, r.length_direct, 1) +
                      p_abs * dual.tail_bound(1.0 - sigma, y2, r.length_dual, 1);
  r.step_error = step.value();
  return r;
}

PairValue l_pair_value(Complex s1, Complex s2, const CharacterGroup& group, const Character& chi,
                       const CoefficientTable& coeffs, const GaussData& gauss, const GaussData& gauss_conjugate,
                       MellinOptions weight) {
  if (chi.conductor != group.q) throw PreconditionError("l_pair_value: character is not primitive");
  const double q = static_cast<double>(group.q);
  const double g = (coeffs.kappa - 1) / 2.0;
  const double y = q * q;
  const MellinWeight direct = pair_weight(s1, s2, coeffs.kappa, weight);
  const MellinWeight dual = pair_weight(1.0 - s1, 1.0 - s2, coeffs.kappa, weight);
  const double log_conductor = std::log(q / (2 * std::numbers::pi));
  const Complex prefactor =
      std::exp(2.0 * (1.0 - s1 - s2) * log_conductor + log_gamma(g + 1.0 - s1) + log_gamma(g + 1.0 - s2) -
               log_gamma(g + s1) - log_gamma(g + s2));
  const Complex root = gauss.root_number * gauss_conjugate.root_number;
  const double p_abs = std::abs(prefactor);

  constexpr double tol = 1e-13;
  const double sigma = std::min(s1.real(), s2.real());
  const double sigma_dual = std::min(1.0 - s1.real(), 1.0 - s2.real());
  const std::uint64_t n1 = direct.truncation_length(sigma, y, 3, tol);
  const std::uint64_t n2 = dual.truncation_length(sigma_dual, y, 3, tol / std::max(p_abs, 1e-300));
  const std::uint64_t n_max = std::max(n1, n2);
  require_depth(coeffs, n_max, "l_pair_value");

  // C_N = Σ_{mn=N} u_m v_n
  auto convolve = [&](Complex e1, Complex e2, bool conj_first, std::uint64_t limit) {
    std::vector<Complex> u(limit + 1), v(limit + 1);
    for (std::uint64_t n = 1; n <= limit; ++n) {
      const Complex x = group.value(chi, n);
      u[n] = coeffs.lambda[n] * (conj_first ? std::conj(x) : x) * n_power(n, e1);
      v[n] = coeffs.lambda[n] * (conj_first ? x : std::conj(x)) * n_power(n, e2);
    }
    std::vector<CompensatedComplexSum> acc(limit + 1);
    for (std::uint64_t m = 1; m <= limit; ++m) {
      if (u[m] == Complex{}) continue;
      for (std::uint64_t n = 1; m * n <= limit; ++n) acc[m * n].add(u[m] * v[n]);
    }
    std::vector<Complex> c(limit + 1);
    for (std::uint64_t k = 1; k <= limit; ++k) c[k] = acc[k].value();
    return c;
  };
  const auto c1 = convolve(s1, s2, false, n1);
  const auto c2 = convolve(1.0 - s1, 1.0 - s2, true, n2);

  CompensatedComplexSum first, second;
  for (std::uint64_t n = 1; n <= n1; ++n)
    if (c1[n] != Complex{}) first.add(c1[n] * direct(n / y));
  for (std::uint64_t n = 1; n <= n2; ++n)
    if (c2[n] != Complex{}) second.add(c2[n] * dual(n / y));

  PairValue out;
  out.value = first.value() + root * prefactor * second.value();
  out.length = n_max;
  out.certified_error = direct.tail_bound(sigma, y, n1, 3) + p_abs * dual.tail_bound(sigma_dual, y, n2, 3);
  return out;
}

}  // namespace twm
