#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace twm {

/// Γ(shift + slope·w) / Γ(shift) inside a Mellin–Barnes weight.
struct GammaFactor {
  std::complex<double> shift;
  double slope = 1.0;
};

struct MellinOptions {
  double abscissa = 2.0;       // c of the vertical contour Re w = c
  double step = 1.0 / 16;      // coarse trapezoid step h; values are reported at h/2
  double damper = 1.0;         // β in G(w) = e^{β w²}; 0 leaves only the Γ decay
  double node_cutoff = 1e-20;  // nodes dropped once |integrand| falls below this fraction of its peak
};

struct WeightValue {
  std::complex<double> value;
  double step_error = 0.0;  // |value(h) - value(h/2)|
};

/// W(x) = (1/2πi) ∫_{(c)} ∏_j Γ(a_j + b_j w)/Γ(a_j) · e^{βw²} · (e^{ℓ} x)^{-w} dw/w
///
/// Trapezoid rule on a vertical line. The node values do not depend on x, so they are
/// tabulated once and each evaluation is a polynomial in e^{-i h ℓ'} with ℓ' = ℓ + log x.
/// For e^{ℓ} x < 1 the contour is moved left of the pole at w = 0 (picking up the residue 1)
/// so that the exponential factor decays there too.
class MellinWeight {
 public:
  MellinWeight(std::vector<GammaFactor> factors, double log_scale, MellinOptions options = {});

  std::complex<double> operator()(double x) const { return evaluate(x).value; }
  WeightValue evaluate(double x) const;

  /// min over c of M_c (e^ℓ x)^{-c}, where M_c = (1/2π) ∫ |integrand on Re w = c| dy.
  double bound(double x) const;
  double log_decay_constant(double c) const;

  /// Bound on Σ_{n>N} d_{p+1}(n) n^{-σ} |W(n/Y)|, using D_{p+1}(x) <= x (1 + log x)^p.
  double tail_bound(double sigma, double scale_y, std::uint64_t n, int log_power) const;
  /// Smallest N (up to a factor 1.01) with tail_bound(σ, Y, N, p) <= tolerance.
  std::uint64_t truncation_length(double sigma, double scale_y, int log_power, double tolerance) const;

  double truncation_height() const { return height_; }
  const MellinOptions& options() const { return options_; }
  double log_scale() const { return log_scale_; }

  static const std::vector<double>& decay_exponents();

 private:
  struct Contour {
    double abscissa = 0.0;
    long k_min = 0;  // node index of g.front(); node k sits at abscissa + i k h/2
    std::vector<std::complex<double>> g;
  };

  std::complex<double> log_integrand(std::complex<double> w) const;
  Contour tabulate(double abscissa) const;
  WeightValue sum_contour(const Contour& contour, double log_arg) const;

  std::vector<GammaFactor> factors_;
  std::vector<std::complex<double>> log_gamma_shift_;
  double log_scale_;
  MellinOptions options_;
  Contour right_;
  Contour left_;
  double height_ = 0.0;
  std::vector<double> log_decay_;  // parallel to decay_exponents()
};

/// Σ_{n>N} d_{p+1}(n) n^{-a} <= a ∫_N^∞ x^{-a} (log x + 1)^p dx, closed form; requires a > 1.
double divisor_tail(std::uint64_t n, double a, int log_power);

MellinWeight single_weight(double t, int kappa, MellinOptions options = {});
MellinWeight pair_weight(std::complex<double> s1, std::complex<double> s2, int kappa, MellinOptions options = {});

/// W_t(x) and 𝒲_{s1,s2}(x) with the given options (default: the e^{w²} damper).
WeightValue weight_single(double t, double x, int kappa = 12, MellinOptions options = {});
WeightValue weight_pair(std::complex<double> s1, std::complex<double> s2, double x, int kappa = 12,
                        MellinOptions options = {});

/// Monotone cubic (PCHIP) interpolant of a weight on a geometric grid in x, real and
/// imaginary parts separately. Outside [x_min, x_max] it falls back to exact evaluation.
class CachedWeight {
 public:
  CachedWeight(const MellinWeight& weight, double x_min, double x_max, std::size_t points_per_octave);
  std::complex<double> operator()(double x) const;
  /// Largest interpolation error observed at the cell midpoints.
  double measured_error() const { return measured_error_; }

 private:
  const MellinWeight* weight_;
  double log_min_, log_step_;
  std::vector<std::complex<double>> values_;
  std::vector<std::complex<double>> slopes_;
  double measured_error_ = 0.0;
};

}  // namespace twm
