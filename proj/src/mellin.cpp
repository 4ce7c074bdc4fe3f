#include "twm/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twm/error.hpp"
#include "twm/special.hpp"

namespace twm {
namespace {

constexpr long kMaxNodesPerSide = 400000;
constexpr int kQuietNodes = 8;

}  // namespace

const std::vector<double>& MellinWeight::decay_exponents() {
  static const std::vector<double> exps = {1, 2, 4, 6, 8, 12, 16, 24, 32};
  return exps;
}

MellinWeight::MellinWeight(std::vector<GammaFactor> factors, double log_scale, MellinOptions options)
    : factors_(std::move(factors)), log_scale_(log_scale), options_(options) {
  if (!(options_.abscissa > 0.0)) throw PreconditionError("MellinWeight: contour abscissa must be positive");
  if (!(options_.step > 0.0)) throw PreconditionError("MellinWeight: quadrature step must be positive");
  if (options_.damper < 0.0) throw PreconditionError("MellinWeight: damper must be non-negative");
  for (const GammaFactor& f : factors_) {
    if (!(f.slope > 0.0)) throw PreconditionError("MellinWeight: Γ slopes must be positive");
    log_gamma_shift_.push_back(log_gamma(f.shift));
  }

  // the contour must pass to the right of every Γ pole w = -(a_j + m)/b_j
  double rightmost_pole = -std::numeric_limits<double>::infinity();
  for (const GammaFactor& f : factors_) rightmost_pole = std::max(rightmost_pole, -f.shift.real() / f.slope);
  if (options_.abscissa <= rightmost_pole + 0.25) options_.abscissa = std::ceil(rightmost_pole) + 1.0;

  right_ = tabulate(options_.abscissa);
  double left = options_.abscissa;
  bool left_ok = true;
  for (const GammaFactor& f : factors_) {
    if (f.shift.real() <= 0.0) left_ok = false;
    left = std::min(left, 0.5 * f.shift.real() / f.slope);
  }
  if (left_ok) left_ = tabulate(-left);

  for (const double c : decay_exponents()) {
    if (c <= rightmost_pole + 0.25) {
      log_decay_.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const Contour contour = tabulate(c);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(contour.g.size());
    for (std::size_t i = 0; i < contour.g.size(); ++i) {
      const Complex w(c, (contour.k_min + static_cast<long>(i)) * options_.step / 2);
      const double l = log_integrand(w).real();
      logs.push_back(l);
      peak = std::max(peak, l);
    }
    double sum = 0.0;
    for (const double l : logs) sum += std::exp(l - peak);
    log_decay_.push_back(peak + std::log(sum * options_.step / 2 / (2 * std::numbers::pi)));
  }
}

Complex MellinWeight::log_integrand(Complex w) const {
  Complex total = options_.damper * w * w - std::log(w);
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    total += log_gamma(factors_[j].shift + factors_[j].slope * w) - log_gamma_shift_[j];
  }
  return total;
}

MellinWeight::Contour MellinWeight::tabulate(double abscissa) const {
  const double half = options_.step / 2;
  const double log_cut = std::log(options_.node_cutoff);
  auto node = [&](long k) { return log_integrand(Complex(abscissa, k * half)); };

  std::vector<Complex> up, down;  // log g_k for k >= 0 and k < 0
  double peak = -std::numeric_limits<double>::infinity();
  auto scan = [&](std::vector<Complex>& out, long start, long dir) {
    int quiet = 0;
    for (long k = start;; k += dir) {
      if (std::abs(k) > kMaxNodesPerSide)
        throw ConvergenceError("MellinWeight: integrand does not decay along the contour");
      const Complex l = node(k);
      out.push_back(l);
      peak = std::max(peak, l.real());
      quiet = (l.real() < peak + log_cut) ? quiet + 1 : 0;
      if (quiet >= kQuietNodes) break;
    }
  };
  scan(up, 0, 1);
  scan(down, -1, -1);

  // trim the quiet tails against the final peak
  auto trim = [&](std::vector<Complex>& v) {
    while (v.size() > 1 && v.back().real() < peak + log_cut) v.pop_back();
  };
  trim(up);
  trim(down);

  Contour c;
  c.abscissa = abscissa;
  c.k_min = -static_cast<long>(down.size());
  c.g.reserve(down.size() + up.size());
  for (auto it = down.rbegin(); it != down.rend(); ++it) c.g.push_back(std::exp(*it));
  for (const Complex& l : up) c.g.push_back(std::exp(l));
  return c;
}

WeightValue MellinWeight::sum_contour(const Contour& contour, double log_arg) const {
  const double half = options_.step / 2;
  const Complex z = std::polar(1.0, -half * log_arg);
  const Complex z2 = z * z;
  // Horner in z² separately on even and odd positions j of g
  Complex even{}, odd{};
  const std::size_t n = contour.g.size();
  for (std::size_t j = n; j-- > 0;) {
    if (j % 2 == 0) {
      even = even * z2 + contour.g[j];
    } else {
      odd = odd * z2 + contour.g[j];
    }
  }
  // undo the Horner offsets: position j carries z^j relative to z^{k_min}
  // even = Σ_{j even} g_j z^{j}, odd·z = Σ_{j odd} g_j z^{j}
  odd *= z;
  const Complex base = std::polar(1.0, -half * log_arg * static_cast<double>(contour.k_min));
  // the coarse grid keeps nodes with even k = k_min + j
  const bool even_j_is_even_k = (contour.k_min % 2 == 0);
  const Complex coarse_part = even_j_is_even_k ? even : odd;
  const double scale = std::exp(-contour.abscissa * log_arg) / (2 * std::numbers::pi);

  WeightValue out;
  const Complex fine = scale * half * base * (even + odd);
  const Complex coarse = scale * options_.step * base * coarse_part;
  out.value = fine;
  out.step_error = std::abs(fine - coarse);
  return out;
}

WeightValue MellinWeight::evaluate(double x) const {
  if (!(x > 0.0)) throw PreconditionError("MellinWeight: x must be positive");
  const double log_arg = log_scale_ + std::log(x);
  if (log_arg >= 0.0 || left_.g.empty()) return sum_contour(right_, log_arg);
  WeightValue v = sum_contour(left_, log_arg);
  v.value += 1.0;
  return v;
}

double MellinWeight::log_decay_constant(double c) const {
  const auto& exps = decay_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] == c) return log_decay_[i];
  throw PreconditionError("MellinWeight: no decay constant tabulated for this exponent");
}

double MellinWeight::bound(double x) const {
  const double log_arg = log_scale_ + std::log(x);
  double best = std::numeric_limits<double>::infinity();
  const auto& exps = decay_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) best = std::min(best, log_decay_[i] - exps[i] * log_arg);
  return std::exp(best);
}

double divisor_tail(std::uint64_t n, double a, int log_power) {
  if (!(a > 1.0)) return std::numeric_limits<double>::infinity();
  const double m = a - 1.0;
  const double u = std::log(static_cast<double>(std::max<std::uint64_t>(n, 1)));
  // ∫_U^∞ e^{-m u} (u+1)^p du = e^{-mU} Σ_j p!/(p-j)! (U+1)^{p-j} / m^{j+1}
  double sum = 0.0;
  double falling = 1.0;
  for (int j = 0; j <= log_power; ++j) {
    sum += falling * std::pow(u + 1.0, log_power - j) / std::pow(m, j + 1);
    falling *= log_power - j;
  }
  return a * std::exp(-m * u) * sum;
}

double MellinWeight::tail_bound(double sigma, double scale_y, std::uint64_t n, int log_power) const {
  const double shift = std::log(scale_y) - log_scale_;
  double best = std::numeric_limits<double>::infinity();
  const auto& exps = decay_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const double c = exps[i];
    if (sigma + c <= 1.0) continue;
    const double tail = divisor_tail(n, sigma + c, log_power);
    if (tail <= 0.0) return 0.0;
    best = std::min(best, log_decay_[i] + c * shift + std::log(tail));
  }
  return std::exp(best);
}

std::uint64_t MellinWeight::truncation_length(double sigma, double scale_y, int log_power, double tolerance) const {
  std::uint64_t hi = 1;
  while (tail_bound(sigma, scale_y, hi, log_power) > tolerance) {
    if (hi > (std::uint64_t{1} << 50)) throw CapabilityError("MellinWeight: truncation length out of range", hi);
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;
  while (hi - lo > std::max<std::uint64_t>(1, lo / 100)) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tail_bound(sigma, scale_y, mid, log_power) > tolerance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

MellinWeight single_weight(double t, int kappa, MellinOptions options) {
  return MellinWeight({{Complex(kappa / 2.0, t), 1.0}}, std::log(2 * std::numbers::pi), options);
}

MellinWeight pair_weight(Complex s1, Complex s2, int kappa, MellinOptions options) {
  const double g = (kappa - 1) / 2.0;
  return MellinWeight({{g + s1, 1.0}, {g + s2, 1.0}}, 2 * std::log(2 * std::numbers::pi), options);
}

WeightValue weight_single(double t, double x, int kappa, MellinOptions options) {
  return single_weight(t, kappa, options).evaluate(x);
}

WeightValue weight_pair(Complex s1, Complex s2, double x, int kappa, MellinOptions options) {
  return pair_weight(s1, s2, kappa, options).evaluate(x);
}

namespace {

double pchip_slope(double d0, double d1) {
  if (d0 * d1 <= 0.0) return 0.0;
  return 2.0 / (1.0 / d0 + 1.0 / d1);  // Fritsch–Carlson harmonic mean, equal spacing
}

double hermite(double f0, double f1, double m0, double m1, double t, double h) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * m1;
}

}  // namespace

CachedWeight::CachedWeight(const MellinWeight& weight, double x_min, double x_max, std::size_t points_per_octave)
    : weight_(&weight) {
  if (!(x_min > 0.0) || !(x_max > x_min) || points_per_octave < 2)
    throw PreconditionError("CachedWeight: need 0 < x_min < x_max and at least 2 points per octave");
  log_min_ = std::log(x_min);
  log_step_ = std::log(2.0) / static_cast<double>(points_per_octave);
  const auto count = static_cast<std::size_t>(std::ceil((std::log(x_max) - log_min_) / log_step_)) + 1;
  values_.resize(count);
  for (std::size_t i = 0; i < count; ++i) values_[i] = weight(std::exp(log_min_ + i * log_step_));

  slopes_.assign(count, Complex{});
  auto parts = [&](auto get) {
    std::vector<double> m(count, 0.0);
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double d_left = i > 0 ? (get(values_[i]) - get(values_[i - 1])) / log_step_ : 0.0;
      const double d_right = (get(values_[i + 1]) - get(values_[i])) / log_step_;
      m[i] = i == 0 ? d_right : pchip_slope(d_left, d_right);
    }
    if (count >= 2) m[count - 1] = (get(values_[count - 1]) - get(values_[count - 2])) / log_step_;
    return m;
  };
  const auto re = parts([](Complex z) { return z.real(); });
  const auto im = parts([](Complex z) { return z.imag(); });
  for (std::size_t i = 0; i < count; ++i) slopes_[i] = {re[i], im[i]};

  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double x = std::exp(log_min_ + (i + 0.5) * log_step_);
    measured_error_ = std::max(measured_error_, std::abs((*this)(x) - weight(x)));
  }
}

Complex CachedWeight::operator()(double x) const {
  const double u = (std::log(x) - log_min_) / log_step_;
  if (u < 0.0 || u >= static_cast<double>(values_.size() - 1)) return (*weight_)(x);
  const auto i = static_cast<std::size_t>(u);
  const double t = u - static_cast<double>(i);
  return {hermite(values_[i].real(), values_[i + 1].real(), slopes_[i].real(), slopes_[i + 1].real(), t, log_step_),
          hermite(values_[i].imag(), values_[i + 1].imag(), slopes_[i].imag(), slopes_[i + 1].imag(), t, log_step_)};
}

}  // namespace twm
