#include "twm/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "twm/error.hpp"
#include "twm/summation.hpp"

namespace twm {
namespace {

// B_2, B_4, ..., B_60
constexpr std::array<double, 30> kBernoulli = {
    0.16666666666666666,  -0.03333333333333333,  0.023809523809523808,  -0.03333333333333333,
    0.07575757575757576,  -0.2531135531135531,   1.1666666666666667,    -7.092156862745098,
    54.971177944862156,   -529.1242424242424,    6192.123188405797,     -86580.25311355312,
    1425517.1666666667,   -27298231.067816094,   601580873.9006424,     -15116315767.092157,
    429614643061.1667,    -13711655205088.332,   488332318973593.2,     -1.9296579341940068e+16,
    8.416930475736826e+17, -4.0338071854059454e+19, 2.1150748638081993e+21, -1.2086626522296526e+23,
    7.500866746076964e+24, -5.038778101481069e+26, 3.6528776484818122e+28, -2.849876930245088e+30,
    2.3865427499683627e+32, -2.1399949257225335e+34};

constexpr double kShiftTarget = 15.0;

bool is_pole(Complex s) { return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real()); }

}  // namespace

Complex log_gamma(Complex s) {
  if (is_pole(s)) throw PreconditionError("log_gamma: pole at a non-positive integer");
  // log Γ(s) = log Γ(s+n) - Σ_{k<n} log(s+k); the principal logs sum to the principal branch
  Complex shift_sum{};
  Complex z = s;
  while (z.real() < kShiftTarget) {
    shift_sum += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series{};
  Complex power = inv;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1)) * power;
    power *= inv2;
  }
  const Complex stirling = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * std::numbers::pi) + series;
  return stirling - shift_sum;
}

Complex digamma(Complex s) {
  if (is_pole(s)) throw PreconditionError("digamma: pole at a non-positive integer");
  Complex shift_sum{};
  Complex z = s;
  while (z.real() < kShiftTarget) {
    shift_sum += 1.0 / z;
    z += 1.0;
  }
  const Complex inv2 = 1.0 / (z * z);
  Complex series{};
  Complex power = inv2;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * power;
    power *= inv2;
  }
  return std::log(z) - 0.5 / z - series - shift_sum;
}

Complex zeta(Complex s, ZetaOptions options) {
  if (s == Complex(1.0, 0.0)) throw PreconditionError("zeta: pole at s = 1");
  const int n = options.cutoff > 0 ? options.cutoff : std::max(30, static_cast<int>(std::ceil(std::abs(s))));
  const int depth = options.depth > 0 ? std::min(options.depth, 30) : 30;
  const double big_n = n;
  const double log_n = std::log(big_n);

  CompensatedComplexSum sum;
  for (int k = n - 1; k >= 1; --k) sum.add(std::exp(-s * std::log(static_cast<double>(k))));
  const Complex n_pow = std::exp(-s * log_n);  // N^{-s}
  sum.add(big_n * n_pow / (s - 1.0));
  sum.add(0.5 * n_pow);
  // Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k-2) N^{-s-2k+1}
  Complex rising = s;  // s(s+1)...(s+2k-2)
  double factorial = 2.0;
  Complex npow = n_pow / big_n;
  for (int k = 1; k <= depth; ++k) {
    const Complex term = kBernoulli[k - 1] / factorial * rising * npow;
    sum.add(term);
    if (options.depth == 0 && std::abs(term) < 1e-17 * std::abs(sum.value())) break;
    rising *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
    factorial *= (2.0 * k + 1) * (2.0 * k + 2);
    npow /= big_n * big_n;
  }
  return sum.value();
}

DerivativeEstimate richardson_derivative(const std::function<Complex(Complex)>& f, Complex s, double h) {
  const Complex d1 = (f(s + h) - f(s - h)) / (2 * h);
  const double h2 = h / 2;
  const Complex d2 = (f(s + h2) - f(s - h2)) / (2 * h2);
  return {(4.0 * d2 - d1) / 3.0, std::abs(d1 - d2)};
}

// ---------------------------------------------------------------- sym² f

namespace {

// μ_j with γ(s) = π^{-3s/2} ∏ Γ((s + μ_j)/2)
std::array<double, 3> sym2_mu(int kappa) { return {1.0, kappa - 1.0, static_cast<double>(kappa)}; }

}  // namespace

SymSquareL::SymSquareL(const CoefficientTable& coeffs, const MultiplicativeTables& tables, MellinOptions options)
    : kappa_(coeffs.kappa), options_(options) {
  // depth: enough for the balance range [1/4, 4] at moderate height; evaluate() checks
  const std::uint64_t depth = std::min<std::uint64_t>(tables.limit, 4000);
  std::vector<double> square(depth + 1, 0.0);  // λ(m²)
  square[1] = 1.0;
  for (std::uint64_t m = 2; m <= depth; ++m) {
    const std::uint64_t p = tables.least_prime[m];
    std::uint64_t rest = m;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    square[m] = prime_power_coefficient(coeffs, p, 2 * e) * square[rest];
  }
  c_.assign(depth + 1, 0.0);
  for (std::uint64_t d = 1; d * d <= depth; ++d)
    for (std::uint64_t m = 1; m * d * d <= depth; ++m) c_[m * d * d] += square[m];
}

std::vector<GammaFactor> SymSquareL::factors(Complex s) const {
  std::vector<GammaFactor> out;
  for (const double mu : sym2_mu(kappa_)) out.push_back({(s + mu) / 2.0, 0.5});
  return out;
}

Complex SymSquareL::log_gamma_factor(Complex s) const {
  Complex total = -1.5 * s * std::log(std::numbers::pi);
  for (const double mu : sym2_mu(kappa_)) total += log_gamma((s + mu) / 2.0);
  return total;
}

Complex SymSquareL::direct_series(Complex s, std::uint64_t n) const {
  if (n > depth()) throw CapabilityError("sym_square_L: direct series beyond the coefficient depth", n);
  CompensatedComplexSum sum;
  for (std::uint64_t k = 1; k <= n; ++k) sum.add(c_[k] * std::exp(-s * std::log(static_cast<double>(k))));
  return sum.value();
}

SymSquareL::Result SymSquareL::evaluate(Complex s, double balance) const {
  if (!(balance > 0.0)) throw PreconditionError("sym_square_L: balance must be positive");
  const double log_pi = std::log(std::numbers::pi);
  const MellinWeight direct(factors(s), 1.5 * log_pi, options_);
  const MellinWeight dual(factors(1.0 - s), 1.5 * log_pi, options_);

  constexpr double tol = 1e-15;
  // coefficients bounded by d_3(n): log power 2
  const std::uint64_t n1 = direct.truncation_length(s.real(), balance, 2, tol);
  const std::uint64_t n2 = dual.truncation_length(1.0 - s.real(), 1.0 / balance, 2, tol);
  const std::uint64_t need = std::max(n1, n2);
  if (need > depth())
    throw CapabilityError("sym_square_L: needs coefficients up to " + std::to_string(need), need);

  // γ(1-s)/γ(s)
  const Complex ratio = std::exp(log_gamma_factor(1.0 - s) - log_gamma_factor(s));

  CompensatedComplexSum first, second;
  for (std::uint64_t n = 1; n <= n1; ++n) {
    if (c_[n] == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    first.add(c_[n] * std::exp(-s * ln) * direct(n / balance));
  }
  for (std::uint64_t n = 1; n <= n2; ++n) {
    if (c_[n] == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    second.add(c_[n] * std::exp((s - 1.0) * ln) * dual(n * balance));
  }
  Result r;
  r.value = first.value() + ratio * second.value();
  r.length_direct = n1;
  r.length_dual = n2;
  r.truncation_error = direct.tail_bound(s.real(), balance, n1, 2) +
                       std::abs(ratio) * dual.tail_bound(1.0 - s.real(), 1.0 / balance, n2, 2);
  return r;
}

SymSquareDerivative sym_square_L_derivative_ratio(const SymSquareL& sym2) {
  const double l1 = sym2(1.0).real();
  const DerivativeEstimate d = richardson_derivative([&](Complex s) { return sym2(s); }, 1.0);
  SymSquareDerivative out;
  out.value_at_1 = l1;
  out.derivative = d.value.real();
  out.log_derivative = out.derivative / l1;
  out.step_difference = d.step_difference;
  return out;
}

// ---------------------------------------------------------------- H(s; q, a, b)

namespace {

struct JSum {
  Complex value;
  int terms;
};

// Σ_{j>=0} λ(p^{l+j}) λ(p^j) X^j until the (m+1)-bound tail drops below 1e-14
JSum shifted_j_sum(const CoefficientTable& coeffs, std::uint64_t p, unsigned l, Complex x) {
  const double r = std::abs(x);
  if (r >= 1.0) throw PreconditionError("euler_H: j-sum needs |p^{-s}| < 1");
  CompensatedComplexSum sum;
  Complex power{1.0, 0.0};
  int j = 0;
  for (;; ++j) {
    sum.add(prime_power_coefficient(coeffs, p, l + j) * prime_power_coefficient(coeffs, p, j) * power);
    power *= x;
    const double jj = j;
    const double tail = (jj + 2) * (l + jj + 2) * std::pow(r, jj + 1) * (1 + r) / std::pow(1 - r, 3);
    if (tail < 1e-14) break;
    if (j > 10000) throw ConvergenceError("euler_H: j-sum did not converge");
  }
  return {sum.value(), j + 1};
}

JSum literal_j_sum(const CoefficientTable& coeffs, std::uint64_t p, unsigned l, Complex s) {
  // λ(p^{l+js}) only exists when js is a non-negative integer for every j
  if (s.imag() != 0.0 || s.real() < 1.0 || s.real() != std::floor(s.real()))
    throw PreconditionError("euler_H: literal reading λ(p^{l+js}) is ill-defined for non-integer s");
  const auto step = static_cast<unsigned>(s.real());
  const double x = std::pow(static_cast<double>(p), -s.real());
  CompensatedComplexSum sum;
  double power = 1.0;
  int j = 0;
  for (;; ++j) {
    sum.add(prime_power_coefficient(coeffs, p, l + j * step) * prime_power_coefficient(coeffs, p, j * step) * power);
    power *= x;
    const double jj = j;
    const double tail = (jj * step + step + l + 1) * (jj * step + step + 1) * std::pow(x, jj + 1) / std::pow(1 - x, 3);
    if (tail < 1e-14) break;
  }
  return {sum.value(), j + 1};
}

}  // namespace

EulerFactorH euler_H(Complex s, std::uint64_t q, std::uint64_t a, std::uint64_t b, const CoefficientTable& coeffs,
                     const MultiplicativeTables& tables, EulerFactorForm form, JSumReading reading) {
  if (q == 0 || a == 0 || b == 0) throw PreconditionError("euler_H: q, a, b must be positive");
  if (std::gcd(a, b) != 1 || std::gcd(a * b, q) != 1)
    throw PreconditionError("euler_H: requires (a,b) = (ab,q) = 1");

  EulerFactorH h;
  h.s = s;
  h.q = q;
  h.a = a;
  h.b = b;

  auto local = [&](std::uint64_t p) {
    const Complex x = std::exp(-s * std::log(static_cast<double>(p)));
    const double lp2 = prime_power_coefficient(coeffs, p, 2);
    const Complex sym = 1.0 - lp2 * x + lp2 * x * x - x * x * x;
    if (form == EulerFactorForm::exact) return sym / (1.0 + x);
    const double lp = prime_power_coefficient(coeffs, p, 1);
    return (1.0 - lp * lp * x) * sym;
  };

  std::vector<std::pair<std::uint64_t, unsigned>> primes;
  for (const auto& [p, e] : tables.factor(q)) primes.emplace_back(p, 0);
  if (a * b > 1)
    for (const auto& pe : tables.factor(a * b)) primes.push_back(pe);
  std::sort(primes.begin(), primes.end());

  Complex product{1.0, 0.0};
  for (const auto& [p, l] : primes) {
    Complex factor = local(p);
    if (l > 0) {
      const JSum j = reading == JSumReading::shifted_index
                         ? shifted_j_sum(coeffs, p, l, std::exp(-s * std::log(static_cast<double>(p))))
                         : literal_j_sum(coeffs, p, l, s);
      factor *= j.value;
      h.j_terms_max = std::max(h.j_terms_max, j.terms);
    }
    h.factors.emplace_back(p, factor);
    product *= factor;
  }
  h.product = product;
  return h;
}

EulerLogDerivative euler_H_log_derivative(std::uint64_t q, std::uint64_t a, std::uint64_t b,
                                          const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                                          EulerFactorForm form) {
  auto h = [&](Complex s) { return euler_H(s, q, a, b, coeffs, tables, form).product; };
  const DerivativeEstimate d = richardson_derivative(h, 1.0);
  EulerLogDerivative out;
  out.value_at_1 = h(1.0).real();
  out.derivative = d.value.real();
  out.log_derivative = out.derivative / out.value_at_1;
  out.step_difference = d.step_difference;
  return out;
}

}  // namespace twm
