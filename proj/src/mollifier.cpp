#include "twm/mollifier.hpp"

#include <cmath>
#include <numeric>

#include "twm/error.hpp"
#include "twm/kernels.hpp"
#include "twm/special.hpp"
#include "twm/summation.hpp"

namespace twm {
namespace {

std::vector<std::uint64_t> odd_primes_between(std::uint64_t q, double lower, double upper,
                                              const MultiplicativeTables& tables) {
  // odd primes p with q^lower < p <= q^upper, compared in the log domain
  const double log_q = std::log(static_cast<double>(q));
  std::vector<std::uint64_t> out;
  for (const std::uint32_t p : tables.primes) {
    if (p == 2) continue;
    const double lp = std::log(static_cast<double>(p));
    if (lp > upper * log_q + 1e-12) break;
    if (lp > lower * log_q + 1e-12) out.push_back(p);
  }
  const double top = std::exp(upper * log_q);
  if (top > tables.limit) throw CapabilityError("mollifier: block range exceeds the prime table", static_cast<std::uint64_t>(top));
  return out;
}

void fill_blocks(MollifierSpec& spec, const MultiplicativeTables& tables) {
  spec.blocks.clear();
  double lower = 0.0;
  for (const double e : spec.upper_exponents) {
    spec.blocks.push_back(odd_primes_between(spec.q, lower, e, tables));
    lower = e;
  }
}

Complex prime_term(std::uint64_t p, double t, const CharacterGroup& group, const Character& chi,
                   const CoefficientTable& coeffs, bool conjugate) {
  const Complex x = group.value(chi, p);
  const double lp = std::log(static_cast<double>(p));
  return coeffs.lambda[p] * (conjugate ? std::conj(x) : x) * std::exp(Complex(-0.5 * lp, -t * lp));
}

}  // namespace

double mollifier_c(double k) { return 64.0 * std::max(1.0, k); }

unsigned mollifier_r(double k) {
  if (k < 1.0) return static_cast<unsigned>(std::ceil(1.0 + 1.0 / k)) + 1;
  return 2;  // k > 1; k = 1 is not covered by the case split and uses the same value
}

MollifierSpec build_spec(std::uint64_t q, int N, int M, double k, const MultiplicativeTables& tables) {
  if (q < 16) throw PreconditionError("build_spec: q must be at least 16 so that log log q > 0");
  if (N < 1 || M < 1) throw PreconditionError("build_spec: N and M must be at least 1");
  if (!(k > 0.0)) throw PreconditionError("build_spec: k must be positive");
  MollifierSpec spec;
  spec.q = q;
  spec.N = N;
  spec.M = M;
  spec.k = k;
  spec.c_k = mollifier_c(k);
  spec.r_k = mollifier_r(k);

  const double threshold = std::pow(10.0, M);
  const auto next = [&](double x) { return 2u * static_cast<unsigned>(std::ceil(N * std::log(x))); };
  unsigned l = next(std::log(static_cast<double>(q)));
  if (l <= threshold) {
    spec.degenerate = true;
    spec.lengths = {l};
  } else {
    while (l > threshold) {
      spec.lengths.push_back(l);
      const unsigned following = next(l);
      if (following >= l) break;
      l = following;
    }
  }
  for (const unsigned len : spec.lengths) spec.upper_exponents.push_back(1.0 / (static_cast<double>(len) * len));
  fill_blocks(spec, tables);
  return spec;
}

MollifierSpec build_spec_explicit(std::uint64_t q, const std::vector<unsigned>& lengths,
                                  const std::vector<double>& upper_exponents, double k,
                                  const MultiplicativeTables& tables) {
  if (q < 3) throw PreconditionError("build_spec_explicit: q must be at least 3");
  if (lengths.empty() || lengths.size() != upper_exponents.size())
    throw PreconditionError("build_spec_explicit: one upper exponent per block length required");
  if (!(k > 0.0)) throw PreconditionError("build_spec_explicit: k must be positive");
  double prev = 0.0;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    if (lengths[j] % 2 != 0) throw PreconditionError("build_spec_explicit: block lengths must be even");
    if (!(upper_exponents[j] > prev)) throw PreconditionError("build_spec_explicit: exponents must increase");
    prev = upper_exponents[j];
  }
  MollifierSpec spec;
  spec.q = q;
  spec.k = k;
  spec.c_k = mollifier_c(k);
  spec.r_k = mollifier_r(k);
  spec.lengths = lengths;
  spec.upper_exponents = upper_exponents;
  fill_blocks(spec, tables);
  return spec;
}

Complex truncated_exponential(unsigned l, Complex x) {
  // Horner on 1 + x/1 (1 + x/2 (1 + ... (1 + x/l)))
  Complex acc{1.0, 0.0};
  for (unsigned j = l; j >= 1; --j) acc = 1.0 + x / static_cast<double>(j) * acc;
  return acc;
}

Complex block_polynomial(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group,
                         const Character& chi, const CoefficientTable& coeffs) {
  if (j < 1 || j > spec.blocks.size()) throw PreconditionError("block_polynomial: block index out of range");
  CompensatedComplexSum sum;
  for (const std::uint64_t p : spec.blocks[j - 1]) sum.add(prime_term(p, t, group, chi, coeffs, false));
  return sum.value();
}

Complex block_mollifier(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group,
                        const Character& chi, const CoefficientTable& coeffs, double alpha) {
  return truncated_exponential(spec.lengths.at(j - 1), alpha * block_polynomial(spec, j, t, group, chi, coeffs));
}

Complex block_q(const MollifierSpec& spec, std::size_t j, double t, const CharacterGroup& group, const Character& chi,
                const CoefficientTable& coeffs) {
  if (j == spec.blocks.size() + 1) return 1.0;
  const Complex p = block_polynomial(spec, j, t, group, chi, coeffs);
  if (p == Complex{}) return 0.0;
  const double power = static_cast<double>(spec.r_k) * spec.lengths[j - 1];
  const Complex base = spec.c_k * p / static_cast<double>(spec.lengths[j - 1]);
  return std::polar(std::exp(power * std::log(std::abs(base))), power * std::arg(base));
}

Complex mollifier_direct(const MollifierSpec& spec, double t, const CharacterGroup& group, const Character& chi,
                         const CoefficientTable& coeffs, double alpha) {
  Complex prod{1.0, 0.0};
  for (std::size_t j = 1; j <= spec.blocks.size(); ++j) prod *= block_mollifier(spec, j, t, group, chi, coeffs, alpha);
  return prod;
}

DirichletPolynomial coefficient_expansion(const MollifierSpec& spec, double alpha, const CoefficientTable& coeffs,
                                          std::size_t support_budget) {
  std::map<std::uint64_t, double> total{{1, 1.0}};
  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    // α^{Ω(a)} ∏ λ(p)^{e_p}/e_p! over multisets of block primes with Σ e_p <= ℓ_j
    std::map<std::uint64_t, std::pair<double, unsigned>> block{{1, {1.0, 0u}}};  // a -> (coefficient, Ω(a))
    for (const std::uint64_t p : spec.blocks[j]) {
      std::map<std::uint64_t, std::pair<double, unsigned>> grown;
      for (const auto& [a, entry] : block) {
        unsigned __int128 value = a;
        double coeff = entry.first;
        for (unsigned e = 0; entry.second + e <= spec.lengths[j]; ++e) {
          if (value > (static_cast<unsigned __int128>(1) << 63))
            throw CapabilityError("coefficient_expansion: support element overflows in block " + std::to_string(j + 1));
          grown[static_cast<std::uint64_t>(value)] = {coeff, entry.second + e};
          value *= p;
          coeff *= alpha * coeffs.lambda[p] / static_cast<double>(e + 1);
        }
        if (grown.size() > support_budget)
          throw CapabilityError("coefficient_expansion: support budget exceeded in block " + std::to_string(j + 1),
                                grown.size());
      }
      block = std::move(grown);
    }
    std::map<std::uint64_t, double> merged;
    for (const auto& [a, x] : total)
      for (const auto& [b, entry] : block) {
        const double y = entry.first;
        const unsigned __int128 ab = static_cast<unsigned __int128>(a) * b;
        if (ab > (static_cast<unsigned __int128>(1) << 63))
          throw CapabilityError("coefficient_expansion: support element overflows in block " + std::to_string(j + 1));
        merged[static_cast<std::uint64_t>(ab)] += x * y;
      }
    if (merged.size() > support_budget)
      throw CapabilityError("coefficient_expansion: support budget exceeded in block " + std::to_string(j + 1),
                            merged.size());
    total = std::move(merged);
  }
  DirichletPolynomial poly;
  poly.coefficients = std::move(total);
  for (const auto& [a, x] : poly.coefficients) {
    poly.max_abs = std::max(poly.max_abs, std::abs(x));
    poly.max_support = std::max(poly.max_support, a);
  }
  return poly;
}

Complex evaluate_polynomial(const DirichletPolynomial& poly, double t, const CharacterGroup& group,
                            const Character& chi, bool conjugate) {
  CompensatedComplexSum sum;
  for (const auto& [a, x] : poly.coefficients) {
    const Complex c = group.value(chi, a);
    if (c == Complex{}) continue;
    const double la = std::log(static_cast<double>(a));
    sum.add(x * (conjugate ? std::conj(c) : c) * std::exp(Complex(-0.5 * la, -t * la)));
  }
  return sum.value();
}

MollifiedFirstMoment mollified_first_moment(double t, double k, const MollifierSpec& spec, const CharacterGroup& group,
                                            const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                                            const LValueOptions& options) {
  if (group.q != spec.q) throw PreconditionError("mollified_first_moment: group modulus differs from the spec");
  const auto& primitive = group.primitive_index;
  const auto gauss = gauss_table(group, primitive, coeffs.kappa, options.execution);
  const LValueBatch batch(group, coeffs, Complex(0.5, t), options);
  const auto l = batch.evaluate(primitive, gauss);

  MollifiedFirstMoment out;
  CompensatedComplexSum lhs;
  for (std::size_t i = 0; i < primitive.size(); ++i) {
    const Character& chi = group.characters[primitive[i]];
    const Character& conj = group.conjugate(chi);
    lhs.add(l[i].value * mollifier_direct(spec, t, group, chi, coeffs, k - 1.0) *
            mollifier_direct(spec, -t, group, conj, coeffs, k));
  }
  out.lhs = lhs.value();

  const DirichletPolynomial x = coefficient_expansion(spec, k - 1.0, coeffs);
  const DirichletPolynomial y = coefficient_expansion(spec, k, coeffs);
  CompensatedSum prediction;
  for (const auto& [b, yb] : y.coefficients) {
    if (std::gcd(b, spec.q) != 1) continue;
    CompensatedSum inner;
    for (const std::uint64_t a : divisors(tables.factor(b))) {
      const auto it = x.coefficients.find(a);
      if (it == x.coefficients.end()) continue;
      inner.add(coefficient_at(coeffs, b / a, tables) * it->second);
    }
    prediction.add(yb / static_cast<double>(b) * inner.value());
  }
  out.prediction = static_cast<double>(primitive_character_count(spec.q, tables)) * prediction.value();
  out.relative_residual = out.prediction == Complex{} ? 0.0 : std::abs(out.lhs - out.prediction) / std::abs(out.prediction);
  out.support_x = x.coefficients.size();
  out.support_y = y.coefficients.size();
  out.max_support = std::max(x.max_support, y.max_support);
  out.max_coefficient = std::max(x.max_abs, y.max_abs);
  return out;
}

double mollified_second_moment_terms(double t, double k, std::size_t v, const MollifierSpec& spec,
                                     const CharacterGroup& group, const CoefficientTable& coeffs, bool with_l,
                                     const LValueOptions& options) {
  if (v > spec.blocks.size()) throw PreconditionError("mollified_second_moment_terms: v exceeds R");
  const auto& primitive = group.primitive_index;
  std::vector<LValueResult> l;
  if (with_l) {
    const auto gauss = gauss_table(group, primitive, coeffs.kappa, options.execution);
    l = LValueBatch(group, coeffs, Complex(0.5, t), options).evaluate(primitive, gauss);
  }
  const double alpha = with_l ? k - 1.0 : k;
  CompensatedSum total;
  for (std::size_t i = 0; i < primitive.size(); ++i) {
    const Character& chi = group.characters[primitive[i]];
    double term = with_l ? std::norm(l[i].value) : 1.0;
    for (std::size_t j = 1; j <= v; ++j) term *= std::norm(block_mollifier(spec, j, t, group, chi, coeffs, alpha));
    term *= std::norm(block_q(spec, v + 1, t, group, chi, coeffs));
    total.add(term);
  }
  return total.value();
}

}  // namespace twm
