#include "twm/hecke.hpp"

#include <omp.h>

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "twm/error.hpp"
#include "twm/parallel.hpp"

namespace twm {
namespace {

// Primes just below 2^62. The sparse recurrence multiplies residues (< 2^62) by weights
// |25k - n| < 2^32 (limit permitting), so a sum of a few thousand terms fits in a signed 128-bit accumulator.
constexpr std::array<std::uint64_t, 4> kModuli = {
    4611686018427387847ULL, 4611686018427387817ULL, 4611686018427387787ULL, 4611686018427387733ULL};

struct PentagonalTerm {
  std::uint64_t degree;
  int sign;
};

// Nonzero coefficients of ∏_{m>=1} (1 - x^m) up to `limit` (Euler's pentagonal theorem).
std::vector<PentagonalTerm> pentagonal_terms(std::uint64_t limit) {
  std::vector<PentagonalTerm> terms;
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t e1 = k * (3 * k - 1) / 2;
    const std::uint64_t e2 = k * (3 * k + 1) / 2;
    if (e1 > limit) break;
    const int sign = (k % 2 == 0) ? 1 : -1;
    terms.push_back({e1, sign});
    if (e2 <= limit) terms.push_back({e2, sign});
  }
  return terms;
}

// Coefficients f_0..f_{n_max} of ∏(1-x^m)^24 modulo `mod`, from x F' P = 24 x P' F:
//   n f_n = Σ_{k>=1} p_k f_{n-k} (25k - n).
std::vector<std::uint64_t> eta24_mod(std::uint64_t n_max, std::uint64_t mod,
                                     const std::vector<PentagonalTerm>& pent) {
  std::vector<std::uint64_t> f(n_max + 1, 0);
  f[0] = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    __int128 acc = 0;
    for (const PentagonalTerm& term : pent) {
      if (term.degree > n) break;
      const __int128 w = static_cast<__int128>(25 * term.degree) - static_cast<__int128>(n);
      const __int128 v = static_cast<__int128>(f[n - term.degree]) * w;
      acc += term.sign > 0 ? v : -v;
    }
    __int128 r = acc % static_cast<__int128>(mod);
    if (r < 0) r += mod;
    const std::uint64_t inv_n = pow_mod(n % mod, mod - 2, mod);
    f[n] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * inv_n % mod);
  }
  return f;
}

std::size_t moduli_needed(std::uint64_t limit) {
  // Hecke's bound |τ(n)| << n^6 holds without Deligne; demand a CRT range past 4 n^{6.5}.
  const double log2_bound = 2.0 + 6.5 * std::log2(static_cast<double>(std::max<std::uint64_t>(limit, 2)));
  std::size_t count = 1;
  double log2_range = 61.0;
  while (log2_range < log2_bound + 1.0 && count < kModuli.size()) {
    ++count;
    log2_range += 61.0;
  }
  if (log2_range < log2_bound + 1.0)
    throw CapabilityError("build_delta_coefficients: limit too large for the CRT range", limit);
  return count;
}

}  // namespace

CoefficientTable build_delta_coefficients(std::uint64_t limit) {
  if (limit < 1) throw PreconditionError("build_delta_coefficients: limit must be at least 1");

  const std::size_t count = moduli_needed(limit);
  const auto pent = pentagonal_terms(limit);
  // τ(n) = f_{n-1}
  std::vector<std::vector<std::uint64_t>> residues(count);
#pragma omp parallel for schedule(static, 1) num_threads(thread_count())
  for (std::size_t i = 0; i < count; ++i) residues[i] = eta24_mod(limit - 1, kModuli[i], pent);

  // Garner mixed-radix reconstruction, then shift into the symmetric range.
  BigInt modulus_product = 1;
  for (std::size_t i = 0; i < count; ++i) modulus_product *= kModuli[i];
  const BigInt half = modulus_product / 2;

  std::vector<std::vector<std::uint64_t>> inverse(count, std::vector<std::uint64_t>(count, 0));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < i; ++j)
      inverse[j][i] = pow_mod(kModuli[j] % kModuli[i], kModuli[i] - 2, kModuli[i]);

  CoefficientTable table;
  table.kappa = 12;
  table.limit = limit;
  table.raw.assign(limit + 1, 0);
  table.lambda.assign(limit + 1, 0.0);
  std::vector<std::uint64_t> digits(count);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t m = kModuli[i];
      unsigned __int128 x = residues[i][n - 1];
      for (std::size_t j = 0; j < i; ++j) {
        const std::uint64_t dj = digits[j] % m;
        x = (x + m - dj) % m;
        x = x * inverse[j][i] % m;
      }
      digits[i] = static_cast<std::uint64_t>(x);
    }
    BigInt value = digits[count - 1];
    for (std::size_t i = count - 1; i-- > 0;) value = value * kModuli[i] + digits[i];
    if (value > half) value -= modulus_product;
    table.raw[n] = value;
    const double scale = std::pow(static_cast<double>(n), 5.5);
    table.lambda[n] = static_cast<double>(value) / scale;
  }
  return table;
}

double prime_power_coefficient(const CoefficientTable& table, std::uint64_t p, unsigned e) {
  if (e == 0) return 1.0;
  if (p > table.limit)
    throw CapabilityError("coefficient_at: prime " + std::to_string(p) + " exceeds the coefficient table", p);
  // stored directly while p^e fits
  std::uint64_t pe = 1;
  unsigned stored = 0;
  while (stored < e && pe <= table.limit / p) {
    pe *= p;
    ++stored;
  }
  if (stored == e) return table.lambda[pe];
  // λ(p^{j+1}) = λ(p) λ(p^j) - λ(p^{j-1})
  const double lp = table.lambda[p];
  double prev = table.lambda[pe / p];
  double cur = table.lambda[pe];
  for (unsigned j = stored; j < e; ++j) {
    const double next = lp * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double coefficient_at(const CoefficientTable& table, std::uint64_t n, const MultiplicativeTables& tables) {
  if (n == 0) throw PreconditionError("coefficient_at: n must be positive");
  if (n <= table.limit) return table.lambda[n];
  double value = 1.0;
  for (const auto& [p, e] : tables.factor(n)) value *= prime_power_coefficient(table, p, e);
  return value;
}

CoefficientTable read_coefficients(std::istream& in, const MultiplicativeTables& tables) {
  CoefficientTable table;
  std::string line;
  bool have_kappa = false;
  std::vector<std::pair<std::uint64_t, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!have_kappa) {
      std::string key;
      ls >> key >> table.kappa;
      if (key != "kappa" || !ls || table.kappa <= 0 || table.kappa % 2 != 0)
        throw PreconditionError("read_coefficients: expected header 'kappa K' with even K > 0");
      have_kappa = true;
      continue;
    }
    std::uint64_t n = 0;
    std::string raw;
    if (!(ls >> n >> raw)) throw PreconditionError("read_coefficients: malformed line '" + line + "'");
    rows.emplace_back(n, raw);
  }
  if (!have_kappa) throw PreconditionError("read_coefficients: missing 'kappa K' header");
  if (rows.empty()) throw PreconditionError("read_coefficients: no coefficients");

  table.limit = rows.size();
  table.lambda.assign(table.limit + 1, 0.0);
  table.raw.assign(table.limit + 1, 0);
  bool integral = true;
  const double weight_exponent = (table.kappa - 1) / 2.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [n, raw] = rows[i];
    if (n != i + 1) throw PreconditionError("read_coefficients: indices must run 1..N without gaps");
    double value = 0.0;
    try {
      const BigInt exact(raw);
      table.raw[n] = exact;
      value = static_cast<double>(exact);
    } catch (const std::exception&) {
      integral = false;
      value = std::stod(raw);
    }
    table.lambda[n] = value / std::pow(static_cast<double>(n), weight_exponent);
  }
  if (!integral) table.raw.clear();
  if (std::abs(table.lambda[1] - 1.0) > 1e-12) throw PreconditionError("read_coefficients: λ(1) must be 1");
  for (std::uint64_t n = 1; n <= table.limit; ++n) {
    const double bound = n <= tables.limit ? tables.divisor_count[n] : [&] {
      double d = 1;
      for (const auto& pe : tables.factor(n)) d *= pe.second + 1;
      return d;
    }();
    if (std::abs(table.lambda[n]) > bound * (1.0 + 1e-9))
      throw PreconditionError("read_coefficients: coefficient " + std::to_string(n) + " violates |λ(n)| <= d(n)");
  }
  return table;
}

void write_coefficients(std::ostream& out, const CoefficientTable& table) {
  out << "kappa " << table.kappa << '\n';
  for (std::uint64_t n = 1; n <= table.limit; ++n) {
    out << n << ' ';
    if (!table.raw.empty()) {
      out << table.raw[n];
    } else {
      std::ostringstream s;
      s.precision(17);
      s << table.lambda[n] * std::pow(static_cast<double>(n), (table.kappa - 1) / 2.0);
      out << s.str();
    }
    out << '\n';
  }
}

}  // namespace twm
