#include "twm/moments.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "twm/error.hpp"
#include "twm/kernels.hpp"
#include "twm/summation.hpp"

namespace twm {
namespace {

ConditionFlags condition_flags(std::uint64_t q, std::uint64_t a, std::uint64_t b, Complex s1, Complex s2,
                               const MultiplicativeTables& tables) {
  ConditionFlags f;
  if (q < 2) return f;
  const double log_q = std::log(static_cast<double>(q));
  const double size = std::log((std::abs(s1) + 1.0) * (std::abs(s2) + 1.0)) / log_q;

  // q0: the divisor with q/q0 odd closest to q^{1/4}, the centre of [q^η, q^{1/2-η}]
  double best = std::numeric_limits<double>::infinity();
  for (const std::uint64_t d : divisors(tables.factor(q))) {
    if ((q / d) % 2 == 0) continue;
    const double gap = std::abs(std::log(static_cast<double>(d)) - log_q / 4);
    if (gap < best) {
      best = gap;
      f.q0 = d;
    }
  }
  const double r = std::log(static_cast<double>(f.q0)) / log_q;
  f.eta_i = std::min(r, 0.5 - r);
  f.epsilon0_i = 19.0 * f.eta_i / 5.0 - size;
  f.condition_i = f.eta_i > 0.0 && f.epsilon0_i > 0.0;

  f.epsilon0_ii = 0.25 - size;
  const double quarter = std::pow(static_cast<double>(q), 0.25);
  f.condition_ii = tables.is_prime(q) && f.epsilon0_ii > 0.0 && static_cast<double>(std::max(a, b)) <= quarter;

  const double qd = static_cast<double>(q);
  double scale = std::numeric_limits<double>::infinity();
  if (f.condition_i) scale = std::pow(qd, 1.0 - f.eta_i / 100.0) + std::pow(qd, 1.0 - f.epsilon0_i);
  if (f.condition_ii) scale = std::min(scale, std::pow(qd, 1.0 - 1.0 / 14400.0));
  f.error_scale_R = std::isfinite(scale) ? scale : 0.0;
  return f;
}

Complex power(double base, Complex e) { return std::exp(e * std::log(base)); }

bool is_diagonal(const MomentTask& task) {
  return task.s1.real() == 0.5 && task.s2.real() == 0.5 && task.s1.imag() == -task.s2.imag();
}

}  // namespace

const char* to_string(DerivativeInterpretation i) {
  return i == DerivativeInterpretation::log_derivative ? "log_derivative" : "raw";
}
const char* to_string(EulerFactorForm f) { return f == EulerFactorForm::exact ? "exact" : "as_printed"; }

MomentTask make_task(std::uint64_t q, std::uint64_t a, std::uint64_t b, Complex s1, Complex s2,
                     const MultiplicativeTables& tables) {
  if (q == 0 || a == 0 || b == 0) throw PreconditionError("moment task: q, a, b must be positive");
  if (q % 4 == 2) throw PreconditionError("moment task: q ≡ 2 (mod 4) has no primitive characters");
  if (std::gcd(a, b) != 1 || std::gcd(a * b, q) != 1)
    throw PreconditionError("moment task: requires (a,b) = (ab,q) = 1");
  if (q > tables.limit) throw PreconditionError("moment task: q exceeds the arithmetic table limit");
  MomentTask task;
  task.q = q;
  task.a = a;
  task.b = b;
  task.s1 = s1;
  task.s2 = s2;
  task.conditions = condition_flags(q, a, b, s1, s2, tables);
  return task;
}

MomentTask make_task(std::uint64_t q, std::uint64_t a, std::uint64_t b, double t, const MultiplicativeTables& tables) {
  return make_task(q, a, b, Complex(0.5, t), Complex(0.5, -t), tables);
}

MainTerms main_term_theorem(const MomentTask& task, const MomentContext& ctx) {
  const Complex s1 = task.s1, s2 = task.s2;
  const Complex sum = s1 + s2;
  if (std::abs(sum - 1.0) < 1e-12) throw PreconditionError("main_term_theorem: s1 + s2 = 1; use the diagonal limit");
  const double phi_star = static_cast<double>(primitive_character_count(task.q, ctx.tables));
  const double g = (ctx.coeffs.kappa - 1) / 2.0;
  const bool exact = ctx.form == EulerFactorForm::exact;

  auto diagonal_series = [&](Complex s) {
    Complex v = zeta(s) * ctx.sym2(s) * euler_H(s, task.q, task.a, task.b, ctx.coeffs, ctx.tables, ctx.form).product;
    if (exact) v /= zeta(2.0 * s);
    return v;
  };

  MainTerms m;
  m.term_1 = phi_star * power(static_cast<double>(task.b), -s1) * power(static_cast<double>(task.a), -s2) *
             diagonal_series(sum);
  const Complex gamma_ratio =
      std::exp(log_gamma(g + 1.0 - s1) + log_gamma(g + 1.0 - s2) - log_gamma(g + s1) - log_gamma(g + s2));
  m.term_2 = power(static_cast<double>(task.q) / (2 * std::numbers::pi), 2.0 * (1.0 - sum)) * phi_star *
             power(static_cast<double>(task.a), -(1.0 - s1)) * power(static_cast<double>(task.b), -(1.0 - s2)) *
             gamma_ratio * diagonal_series(2.0 - sum);
  return m;
}

DiagonalLimit main_term_diagonal_limit(std::uint64_t q, double t, std::uint64_t a, std::uint64_t b,
                                       const MomentContext& ctx, DerivativeInterpretation interpretation) {
  if (q % 4 == 2) throw PreconditionError("diagonal limit: q ≡ 2 (mod 4) has no primitive characters");
  if (std::gcd(a, b) != 1 || std::gcd(a * b, q) != 1)
    throw PreconditionError("diagonal limit: requires (a,b) = (ab,q) = 1");
  const double phi_star = static_cast<double>(primitive_character_count(q, ctx.tables));
  const double kappa_half = ctx.coeffs.kappa / 2.0;
  const bool exact = ctx.form == EulerFactorForm::exact;

  const SymSquareDerivative l = sym_square_L_derivative_ratio(ctx.sym2);
  const EulerLogDerivative h = euler_H_log_derivative(q, a, b, ctx.coeffs, ctx.tables, ctx.form);
  const bool logarithmic = interpretation == DerivativeInterpretation::log_derivative;
  const double d_l = logarithmic ? l.log_derivative : l.derivative;
  const double d_h = logarithmic ? h.log_derivative : h.derivative;

  const Complex prefactor = phi_star * power(static_cast<double>(a), -Complex(0.5, -t)) *
                            power(static_cast<double>(b), -Complex(0.5, t));
  Complex bracket = 2.0 * std::log(static_cast<double>(q) / (2 * std::numbers::pi)) + 2.0 * d_l + 2.0 * d_h +
                    digamma(Complex(kappa_half, t)) + digamma(Complex(kappa_half, -t)) -
                    std::log(static_cast<double>(a * b));
  double front = l.value_at_1 * h.value_at_1;
  if (exact) {
    const Complex zeta2 = zeta(2.0);
    const DerivativeEstimate dz = richardson_derivative([](Complex s) { return zeta(s); }, 2.0);
    bracket += -4.0 * dz.value / zeta2 + 2.0 * std::numbers::egamma;
    front /= zeta2.real();
  }
  DiagonalLimit out;
  out.value = prefactor * front * bracket;
  out.sym2_derivative_certificate = l.step_difference;
  out.euler_derivative_certificate = h.step_difference;
  return out;
}

BruteForceMoment brute_force_twisted_moment(const MomentTask& task, const CharacterGroup& group,
                                            const CoefficientTable& coeffs, const LValueOptions& options) {
  if (group.q != task.q) throw PreconditionError("brute force: character group modulus differs from the task");
  const auto& primitive = group.primitive_index;
  std::vector<std::uint32_t> conjugates(primitive.size());
  for (std::size_t i = 0; i < primitive.size(); ++i) conjugates[i] = group.conjugate_index[primitive[i]];

  const auto gauss = gauss_table(group, primitive, coeffs.kappa, options.execution);
  const auto gauss_conj = gauss_table(group, conjugates, coeffs.kappa, options.execution);
  const LValueBatch batch_1(group, coeffs, task.s1, options);
  const auto l1 = batch_1.evaluate(primitive, gauss);
  std::vector<LValueResult> l2;
  std::uint64_t length_2 = 0;
  if (task.s2 == task.s1) {
    l2 = batch_1.evaluate(conjugates, gauss_conj);
    length_2 = batch_1.length_direct();
  } else {
    const LValueBatch batch_2(group, coeffs, task.s2, options);
    l2 = batch_2.evaluate(conjugates, gauss_conj);
    length_2 = batch_2.length_direct();
  }

  CompensatedComplexSum total;
  CompensatedSum error;
  for (std::size_t i = 0; i < primitive.size(); ++i) {
    const Character& chi = group.characters[primitive[i]];
    const Complex twist = group.value(chi, task.a) * std::conj(group.value(chi, task.b));
    total.add(l1[i].value * l2[i].value * twist);
    const double e1 = l1[i].certified_error + l1[i].step_error;
    const double e2 = l2[i].certified_error + l2[i].step_error;
    error.add(e1 * std::abs(l2[i].value) + e2 * std::abs(l1[i].value) + e1 * e2);
  }
  BruteForceMoment out;
  out.value = total.value();
  out.certified_error = error.value();
  out.characters = primitive.size();
  out.length_1 = batch_1.length_direct();
  out.length_2 = length_2;
  return out;
}

MomentReport moment_compare(const MomentTask& task, const CharacterGroup& group, const MomentContext& ctx,
                            DerivativeInterpretation interpretation) {
  MomentReport r;
  r.q = task.q;
  r.a = task.a;
  r.b = task.b;
  r.s1 = task.s1;
  r.s2 = task.s2;
  r.euler_form = to_string(ctx.form);
  r.conditions = task.conditions;
  r.error_scale_R = task.conditions.error_scale_R;
  r.phi_star = primitive_character_count(task.q, ctx.tables);

  BruteForceMoment lhs;
  try {
    lhs = brute_force_twisted_moment(task, group, ctx.coeffs, ctx.lvalue);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("moment_compare[brute force]: ") + e.what());
  }
  r.lhs = lhs.value;
  r.lhs_certified_error = lhs.certified_error;
  r.length_1 = lhs.length_1;
  r.length_2 = lhs.length_2;

  auto relative = [&](Complex main) { return main == Complex{} ? 0.0 : std::abs(r.lhs - main) / std::abs(main); };
  try {
    if (is_diagonal(task)) {
      r.form = "diagonal_limit";
      const double t = task.s1.imag();
      const auto other = interpretation == DerivativeInterpretation::log_derivative ? DerivativeInterpretation::raw
                                                                                    : DerivativeInterpretation::log_derivative;
      const DiagonalLimit main = main_term_diagonal_limit(task.q, t, task.a, task.b, ctx, interpretation);
      const DiagonalLimit alt = main_term_diagonal_limit(task.q, t, task.a, task.b, ctx, other);
      r.main_term_1 = main.value;
      r.main_term_2 = 0.0;
      r.main_sum = main.value;
      r.interpretation = to_string(interpretation);
      r.alternate_main_sum = alt.value;
      r.alternate_relative_residual = relative(alt.value);
      r.derivative_certificate = main.sym2_derivative_certificate + main.euler_derivative_certificate;
    } else {
      r.form = "theorem";
      const MainTerms m = main_term_theorem(task, ctx);
      r.main_term_1 = m.term_1;
      r.main_term_2 = m.term_2;
      r.main_sum = m.term_1 + m.term_2;
      r.interpretation = "n/a";
      r.alternate_main_sum = r.main_sum;
      r.alternate_relative_residual = relative(r.main_sum);
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("moment_compare[main term]: ") + e.what());
  }
  r.residual = r.lhs - r.main_sum;
  r.relative_residual = relative(r.main_sum);
  return r;
}

std::vector<ScanRow> moment_scan(const std::vector<std::uint64_t>& q_list, double t, std::uint64_t a, std::uint64_t b,
                                 const MomentContext& ctx, DerivativeInterpretation interpretation) {
  std::vector<ScanRow> rows;
  for (const std::uint64_t q : q_list) {
    ScanRow row;
    row.q = q;
    try {
      const MomentTask task = make_task(q, a, b, t, ctx.tables);
      const CharacterGroup group = build_group(q);
      row.report = moment_compare(task, group, ctx, interpretation);
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<DerivativeInterpretation> calibrate_interpretation(const std::vector<ScanRow>& rows) {
  bool primary_wins = true, alternate_wins = true;
  DerivativeInterpretation primary = DerivativeInterpretation::log_derivative;
  bool seen = false;
  for (const ScanRow& row : rows) {
    if (!row.report || row.report->form != "diagonal_limit") continue;
    const MomentReport& r = *row.report;
    primary = r.interpretation == "raw" ? DerivativeInterpretation::raw : DerivativeInterpretation::log_derivative;
    seen = true;
    primary_wins = primary_wins && r.relative_residual < r.alternate_relative_residual;
    alternate_wins = alternate_wins && r.alternate_relative_residual < r.relative_residual;
  }
  if (!seen) return std::nullopt;
  const auto other = primary == DerivativeInterpretation::log_derivative ? DerivativeInterpretation::raw
                                                                         : DerivativeInterpretation::log_derivative;
  if (primary_wins) return primary;
  if (alternate_wins) return other;
  return std::nullopt;
}

KthMoment kth_moment_sum(std::uint64_t q, double t, double k, const CharacterGroup& group,
                         const CoefficientTable& coeffs, const MultiplicativeTables& tables,
                         const LValueOptions& options) {
  if (q % 4 == 2) throw PreconditionError("kth moment: q ≡ 2 (mod 4) has no primitive characters");
  if (group.q != q) throw PreconditionError("kth moment: character group modulus differs");
  if (k < 0.0) throw PreconditionError("kth moment: k must be non-negative");
  KthMoment out;
  out.q = q;
  out.t = t;
  out.k = k;
  out.phi_star = primitive_character_count(q, tables);
  const auto gauss = gauss_table(group, group.primitive_index, coeffs.kappa, options.execution);
  const LValueBatch batch(group, coeffs, Complex(0.5, t), options);
  const auto values = batch.evaluate(group.primitive_index, gauss);
  CompensatedSum sum;
  for (const LValueResult& v : values) {
    sum.add(k == 0.0 ? 1.0 : std::pow(std::abs(v.value), 2.0 * k));
    out.max_certified_error = std::max(out.max_certified_error, v.certified_error + v.step_error);
  }
  out.sum = sum.value();
  const double log_q = std::log(static_cast<double>(q));
  out.normalized = out.phi_star == 0 ? 0.0 : out.sum / (static_cast<double>(out.phi_star) * std::pow(log_q, k * k));
  return out;
}

}  // namespace twm
