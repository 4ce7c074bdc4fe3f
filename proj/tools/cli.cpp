#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "twm/afe.hpp"
#include "twm/error.hpp"
#include "twm/kernels.hpp"
#include "twm/mellin.hpp"
#include "twm/mollifier.hpp"
#include "twm/moments.hpp"
#include "twm/parallel.hpp"
#include "twm/report.hpp"

namespace twm::cli {
namespace {

using Complex = std::complex<double>;

bool needs_primitive(const std::string& sub) {
  return sub == "lvalue" || sub == "moment-compare" || sub == "kmoment" || sub == "mollify";
}

bool explicit_s(const RunConfig& c) { return c.s1_re || c.s1_im || c.s2_re || c.s2_im; }

Complex s1_of(const RunConfig& c) { return {c.s1_re.value_or(0.5), c.s1_im.value_or(c.t)}; }
Complex s2_of(const RunConfig& c) { return {c.s2_re.value_or(0.5), c.s2_im.value_or(-c.t)}; }

std::string format_of(const RunConfig& c) {
  if (!c.format.empty()) return c.format;
  return c.subcommand == "moment-scan" || c.subcommand == "weights" || c.subcommand == "coeffs" ? "csv" : "json";
}

LValueOptions lvalue_options(const RunConfig& c) {
  LValueOptions o;
  o.weight.step = c.step;
  o.fast_weights = c.fast_weights;
  return o;
}

DerivativeInterpretation interpretation_of(const RunConfig& c) {
  return c.interpretation == "raw" ? DerivativeInterpretation::raw : DerivativeInterpretation::log_derivative;
}

/// Adds provenance: nested in JSON, as trailing provenance_* columns in CSV.
std::string emit(const RunConfig& c, std::vector<Record> rows, Record single) {
  const Record prov = provenance_record({c.limit, c.step});
  if (format_of(c) == "csv") {
    if (rows.empty()) rows.push_back(std::move(single));
    for (Record& r : rows) r.add("provenance", prov);
    return to_csv(rows);
  }
  single.add("provenance", prov);
  return to_json(single);
}

/// Coefficient and sieve tables shared by the numeric subcommands.
struct Tables {
  CoefficientTable coeffs;
  MultiplicativeTables arith;
};

Tables make_tables(const RunConfig& c) {
  return {build_delta_coefficients(c.limit), build_tables(static_cast<std::uint32_t>(2 * c.limit))};
}

std::string run_coeffs(const RunConfig& c) {
  const CoefficientTable table = build_delta_coefficients(c.limit);
  const std::uint64_t n_max = c.count == 0 ? table.limit : c.count;
  std::vector<Record> rows;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    Record r;
    r.add("n", n).add("raw", table.raw[n].str()).add("lambda", table.lambda[n]);
    rows.push_back(std::move(r));
  }
  Record single;
  single.add("kappa", table.kappa).add("limit", table.limit);
  if (format_of(c) == "csv") return emit(c, std::move(rows), {});
  single.add("rows", std::move(rows));
  return emit(c, {}, std::move(single));
}

std::string run_chars(const RunConfig& c) {
  const std::uint64_t q = c.q_list.front();
  const CharacterGroup group = build_group(q);
  std::vector<Record> rows;
  for (const Character& chi : group.characters) {
    Record r;
    std::string exps;
    for (const std::uint64_t e : chi.exponents) exps += (exps.empty() ? "" : " ") + std::to_string(e);
    const bool primitive = chi.conductor == q;
    r.add("q", q).add("index", static_cast<std::uint64_t>(chi.index)).add("exponents", exps);
    r.add("conductor", chi.conductor).add("parity", chi.parity).add("primitive", primitive);
    if (primitive) {
      const GaussData g = gauss_root_data(group, chi, 12);
      r.add("gauss_sum", g.gauss_sum).add("root_number", g.root_number);
    }
    rows.push_back(std::move(r));
  }
  if (format_of(c) == "csv") return emit(c, std::move(rows), {});
  Record single;
  std::vector<Record> gens;
  for (const auto& g : group.generators) {
    Record r;
    r.add("residue", g.residue).add("order", g.order);
    gens.push_back(std::move(r));
  }
  single.add("q", q).add("exponent", group.exponent).add("generators", std::move(gens));
  single.add("primitive_count", static_cast<std::uint64_t>(group.primitive_index.size()));
  single.add("characters", std::move(rows));
  return emit(c, {}, std::move(single));
}

std::string run_lvalue(const RunConfig& c) {
  const std::uint64_t q = c.q_list.front();
  const CoefficientTable coeffs = build_delta_coefficients(c.limit);
  const CharacterGroup group = build_group(q);
  if (c.character >= group.primitive_index.size())
    throw PreconditionError("lvalue: --chi must index a primitive character (0.." +
                            std::to_string(group.primitive_index.size() - 1) + ")");
  const std::vector<std::uint32_t> chars{group.primitive_index[c.character]};
  const auto gauss = gauss_table(group, chars, coeffs.kappa, Execution::parallel);
  const LValueBatch batch(group, coeffs, explicit_s(c) ? s1_of(c) : Complex(0.5, c.t), lvalue_options(c));
  Record r;
  r.add("q", q).extend(to_record(batch.evaluate(chars, gauss).front()));
  return emit(c, {}, std::move(r));
}

std::string run_weights(const RunConfig& c) {
  const MellinOptions opts{2.0, c.step, c.damper, 1e-20};
  const MellinWeight w = c.weight_kind == "pair" ? pair_weight(s1_of(c), s2_of(c), 12, opts) : single_weight(c.t, 12, opts);
  const std::uint64_t points = c.count == 0 ? 25 : c.count;
  std::vector<Record> rows;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double x = points == 1 ? c.x_min : c.x_min * std::pow(c.x_max / c.x_min, static_cast<double>(i) / (points - 1));
    const WeightValue v = w.evaluate(x);
    Record r;
    r.add("kind", c.weight_kind).add("x", x).add("value", v.value).add("step_error", v.step_error);
    r.add("bound", w.bound(x));
    rows.push_back(std::move(r));
  }
  if (format_of(c) == "csv") return emit(c, std::move(rows), {});
  Record single;
  single.add("kind", c.weight_kind).add("damper", c.damper);
  if (c.weight_kind == "pair") single.add("s1", s1_of(c)).add("s2", s2_of(c));
  else single.add("t", c.t);
  single.add("rows", std::move(rows));
  return emit(c, {}, std::move(single));
}

struct MomentSetup {
  Tables tables;
  std::unique_ptr<SymSquareL> sym2;
  std::unique_ptr<MomentContext> ctx;
};

MomentSetup moment_setup(const RunConfig& c) {
  MomentSetup m{make_tables(c), nullptr, nullptr};
  m.sym2 = std::make_unique<SymSquareL>(m.tables.coeffs, m.tables.arith);
  m.ctx = std::make_unique<MomentContext>(MomentContext{m.tables.coeffs, m.tables.arith, *m.sym2,
                                                        c.euler_form == "as_printed" ? EulerFactorForm::as_printed
                                                                                     : EulerFactorForm::exact,
                                                        lvalue_options(c)});
  return m;
}

std::string run_moment_compare(const RunConfig& c) {
  const std::uint64_t q = c.q_list.front();
  const MomentSetup m = moment_setup(c);
  const MomentTask task = explicit_s(c) ? make_task(q, c.a, c.b, s1_of(c), s2_of(c), m.tables.arith)
                                        : make_task(q, c.a, c.b, c.t, m.tables.arith);
  const CharacterGroup group = build_group(q);
  return emit(c, {}, to_record(moment_compare(task, group, *m.ctx, interpretation_of(c))));
}

std::string run_moment_scan(const RunConfig& c) {
  const MomentSetup m = moment_setup(c);
  const auto rows = moment_scan(c.q_list, c.t, c.a, c.b, *m.ctx, interpretation_of(c));
  std::vector<Record> records;
  for (const ScanRow& row : rows) records.push_back(to_record(row));
  if (format_of(c) == "csv") return emit(c, std::move(records), {});
  Record single;
  const auto winner = calibrate_interpretation(rows);
  single.add("t", c.t).add("a", c.a).add("b", c.b);
  single.add("winning_interpretation", winner ? to_string(*winner) : "none");
  single.add("rows", std::move(records));
  return emit(c, {}, std::move(single));
}

std::string run_kmoment(const RunConfig& c) {
  const Tables t = make_tables(c);
  std::vector<Record> rows;
  for (const std::uint64_t q : c.q_list) {
    const CharacterGroup group = build_group(q);
    rows.push_back(to_record(kth_moment_sum(q, c.t, c.k, group, t.coeffs, t.arith, lvalue_options(c))));
  }
  if (format_of(c) == "csv" || rows.size() > 1) {
    if (format_of(c) == "csv") return emit(c, std::move(rows), {});
    Record single;
    single.add("rows", std::move(rows));
    return emit(c, {}, std::move(single));
  }
  return emit(c, {}, std::move(rows.front()));
}

std::string run_mollify(const RunConfig& c) {
  const std::uint64_t q = c.q_list.front();
  const Tables t = make_tables(c);
  const MollifierSpec spec = c.N > 0 && c.M > 0 ? build_spec(q, c.N, c.M, c.k, t.arith)
                                                : build_spec_explicit(q, c.lengths, c.exponents, c.k, t.arith);
  const CharacterGroup group = build_group(q);
  const auto opts = lvalue_options(c);
  Record r;
  r.add("t", c.t).add("spec", to_record(spec));
  r.add("first_moment", to_record(mollified_first_moment(c.t, c.k, spec, group, t.coeffs, t.arith, opts)));
  const std::size_t v = spec.blocks.size();
  r.add("second_moment_with_l", mollified_second_moment_terms(c.t, c.k, v, spec, group, t.coeffs, true, opts));
  r.add("second_moment_without_l", mollified_second_moment_terms(c.t, c.k, v, spec, group, t.coeffs, false, opts));
  return emit(c, {}, std::move(r));
}

}  // namespace

void validate(const RunConfig& c) {
  static const std::vector<std::string> known{"coeffs", "chars", "lvalue", "weights", "moment-compare",
                                              "moment-scan", "kmoment", "mollify"};
  if (std::find(known.begin(), known.end(), c.subcommand) == known.end())
    throw PreconditionError("unknown subcommand '" + c.subcommand + "'");
  if (c.limit < 100 || c.limit > (1ull << 30)) throw PreconditionError("--limit must lie in [100, 2^30]");
  if (!(c.step > 0.0 && c.step <= 0.5)) throw PreconditionError("--step must lie in (0, 1/2]");
  if (c.threads < 0) throw PreconditionError("--threads must be non-negative");
  if (!c.format.empty() && c.format != "json" && c.format != "csv") throw PreconditionError("--out must be json or csv");
  if (c.interpretation != "log_derivative" && c.interpretation != "raw")
    throw PreconditionError("--interpretation must be log_derivative or raw");
  if (c.euler_form != "exact" && c.euler_form != "as_printed")
    throw PreconditionError("--euler-form must be exact or as_printed");

  const bool takes_q = c.subcommand != "coeffs" && c.subcommand != "weights";
  if (takes_q && c.q_list.empty()) throw PreconditionError("--q is required for " + c.subcommand);
  if (c.subcommand == "moment-scan") return;  // per-row validation; failures land in the status column
  for (const std::uint64_t q : c.q_list) {
    if (q < 3) throw PreconditionError("q must be at least 3");
    if (needs_primitive(c.subcommand) && q % 4 == 2)
      throw PreconditionError("q = " + std::to_string(q) + " ≡ 2 (mod 4): there are no primitive characters mod q");
    if (needs_primitive(c.subcommand) && q > c.limit)
      throw PreconditionError("q = " + std::to_string(q) + " exceeds the coefficient limit " + std::to_string(c.limit));
  }
  if (c.subcommand == "moment-compare") {
    const std::uint64_t q = c.q_list.front();
    if (c.a == 0 || c.b == 0) throw PreconditionError("a and b must be positive");
    if (std::gcd(c.a, c.b) != 1) throw PreconditionError("(a, b) = 1 required");
    if (std::gcd(c.a * c.b, q) != 1) throw PreconditionError("(ab, q) = 1 required");
  }
  if (c.subcommand == "kmoment" && c.k < 0.0) throw PreconditionError("--k must be non-negative");
  if (c.subcommand == "mollify") {
    if (!(c.k > 0.0)) throw PreconditionError("--k must be positive");
    if ((c.N > 0) != (c.M > 0)) throw PreconditionError("--N and --M must be given together");
    if (c.N == 0 && c.lengths.size() != c.exponents.size())
      throw PreconditionError("--lengths and --exponents must have the same number of entries");
  }
  if (c.subcommand == "weights") {
    if (c.weight_kind != "single" && c.weight_kind != "pair") throw PreconditionError("--kind must be single or pair");
    if (!(c.x_min > 0.0 && c.x_max >= c.x_min)) throw PreconditionError("need 0 < --x-min <= --x-max");
    if (c.damper < 0.0) throw PreconditionError("--damper must be non-negative");
  }
}

std::string execute(const RunConfig& c) {
  validate(c);
  if (c.threads > 0) set_thread_count(c.threads);
  if (c.subcommand == "coeffs") return run_coeffs(c);
  if (c.subcommand == "chars") return run_chars(c);
  if (c.subcommand == "lvalue") return run_lvalue(c);
  if (c.subcommand == "weights") return run_weights(c);
  if (c.subcommand == "moment-compare") return run_moment_compare(c);
  if (c.subcommand == "moment-scan") return run_moment_scan(c);
  if (c.subcommand == "kmoment") return run_kmoment(c);
  return run_mollify(c);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Twisted moments of L(s, Δ⊗χ)"};
  app.require_subcommand(1);
  app.fallthrough();
  double s1_re = 0, s1_im = 0, s2_re = 0, s2_im = 0;
  auto* o_s1_re = app.add_option("--s1-re", s1_re, "Re s1 (default 1/2)");
  auto* o_s1_im = app.add_option("--s1-im", s1_im, "Im s1 (default t)");
  auto* o_s2_re = app.add_option("--s2-re", s2_re, "Re s2 (default 1/2)");
  auto* o_s2_im = app.add_option("--s2-im", s2_im, "Im s2 (default -t)");
  app.add_option("--q", c.q_list, "modulus, or comma-separated list for scans")->delimiter(',');
  app.add_option("--t", c.t, "height t");
  app.add_option("--a", c.a, "twist a");
  app.add_option("--b", c.b, "twist b");
  app.add_option("--k", c.k, "moment exponent k");
  app.add_option("--limit", c.limit, "coefficient table length");
  app.add_option("--step", c.step, "contour quadrature step");
  app.add_option("--threads", c.threads, "thread count (0: OpenMP default)")->envname("TWM_THREADS");
  app.add_option("--out", c.format, "json or csv");
  app.add_option("--output", c.output, "report path (default stdout)");
  app.add_flag("--fast-weights", c.fast_weights, "interpolate weights instead of exact evaluation");
  app.add_option("--interpretation", c.interpretation, "log_derivative or raw");
  app.add_option("--euler-form", c.euler_form, "exact or as_printed");
  app.add_option("--chi", c.character, "primitive character ordinal (lvalue)");
  app.add_option("--count", c.count, "rows (coeffs) or grid points (weights)");
  app.add_option("--x-min", c.x_min, "weights grid start");
  app.add_option("--x-max", c.x_max, "weights grid end");
  app.add_option("--kind", c.weight_kind, "single or pair (weights)");
  app.add_option("--damper", c.damper, "β in e^{βw²} (weights)");
  app.add_option("--N", c.N, "mollifier N (with --M: recursive block lengths)");
  app.add_option("--M", c.M, "mollifier M");
  app.add_option("--lengths", c.lengths, "explicit block lengths")->delimiter(',');
  app.add_option("--exponents", c.exponents, "explicit block upper exponents of q")->delimiter(',');

  for (const auto& [name, help] : std::vector<std::pair<const char*, const char*>>{
           {"coeffs", "normalized Hecke eigenvalues λ(n) with τ(n)"},
           {"chars", "primitive characters mod q with conductor, parity and root number"},
           {"lvalue", "L(s, Δ⊗χ) for one or all primitive χ mod q"},
           {"weights", "AFE weight W on a geometric x grid"},
           {"moment-compare", "twisted second moment against its main terms at one q"},
           {"moment-scan", "moment-compare over a list of moduli"},
           {"kmoment", "Σ|L(1/2,Δ⊗χ)|^{2k} against its predicted size"},
           {"mollify", "mollifier spec, first moment and second-moment terms"}})
    app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (*o_s1_re) c.s1_re = s1_re;
  if (*o_s1_im) c.s1_im = s1_im;
  if (*o_s2_re) c.s2_re = s2_re;
  if (*o_s2_im) c.s2_im = s2_im;

  try {
    const std::string text = execute(c);
    err << "threads: " << thread_count() << "\n";
    if (c.output.empty()) {
      out << text;
    } else {
      std::ofstream file(c.output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open " + c.output);
      file << text;
    }
    return 0;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what();
    if (e.required() != 0) err << " (needs " << e.required() << ")";
    err << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace twm::cli
