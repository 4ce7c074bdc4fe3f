#include "twm/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "twm/error.hpp"
#include "twm/summation.hpp"

namespace twm {
namespace {

enum class Kind { odd_cyclic, minus_one, five };

struct GeneratorInfo {
  Kind kind;
  std::uint64_t p;
  unsigned e;
};

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
  if (p == 2) return 1;
  Factorization f;
  std::uint64_t m = p - 1;
  for (std::uint64_t r = 2; r * r <= m; ++r) {
    if (m % r != 0) continue;
    f.emplace_back(r, 0);
    while (m % r == 0) m /= r;
  }
  if (m > 1) f.emplace_back(m, 0);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (const auto& fr : f) ok = ok && pow_mod(g, (p - 1) / fr.first, p) != 1;
    if (ok) return g;
  }
}

// inverse of a mod m for gcd(a, m) = 1, m >= 1
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t) % m;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Factorization factor_small(std::uint64_t n) {
  Factorization f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

}  // namespace

CharacterGroup build_group(std::uint64_t q) {
  if (q == 0) throw PreconditionError("build_group: q must be positive");
  if (q > (std::uint64_t{1} << 32)) throw CapabilityError("build_group: q too large for dense tables", q);

  CharacterGroup g;
  g.q = q;
  std::vector<GeneratorInfo> info;

  for (const auto& [p, e] : factor_small(q)) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const std::uint64_t rest = q / pe;
    const std::uint64_t rest_inverse = inverse_mod(rest % pe, pe);
    const auto lift = [&](std::uint64_t local) {
      // x ≡ local (mod p^e), x ≡ 1 (mod q/p^e)
      const std::uint64_t t = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>((local + pe - 1) % pe) * rest_inverse % pe);
      return (1 + rest * t) % q;
    };

    if (p != 2) {
      std::uint64_t root = primitive_root_mod_prime(p);
      if (e >= 2 && pow_mod(root, p - 1, p * p) == 1) root += p;
      const std::uint64_t order = pe / p * (p - 1);
      std::vector<std::int64_t> dlog(pe, -1);
      std::uint64_t x = 1;
      for (std::uint64_t k = 0; k < order; ++k) {
        dlog[x] = static_cast<std::int64_t>(k);
        x = x * root % pe;
      }
      g.generators.push_back({lift(root), order});
      g.local_.push_back({pe, std::move(dlog)});
      info.push_back({Kind::odd_cyclic, p, e});
    } else if (e >= 2) {
      // (Z/2^e)^* = <-1> x <5>
      const std::uint64_t order5 = e >= 3 ? pe / 4 : 1;
      std::vector<std::int64_t> dlog_sign(pe, -1), dlog_five(pe, -1);
      std::uint64_t x = 1;
      for (std::uint64_t b = 0; b < order5; ++b) {
        dlog_sign[x] = 0;
        dlog_five[x] = static_cast<std::int64_t>(b);
        dlog_sign[pe - x] = 1;
        dlog_five[pe - x] = static_cast<std::int64_t>(b);
        x = x * 5 % pe;
      }
      g.generators.push_back({lift(pe - 1), 2});
      g.local_.push_back({pe, std::move(dlog_sign)});
      info.push_back({Kind::minus_one, 2, e});
      if (e >= 3) {
        g.generators.push_back({lift(5), order5});
        g.local_.push_back({pe, std::move(dlog_five)});
        info.push_back({Kind::five, 2, e});
      }
    }
    // e == 1 at p == 2: trivial unit group, no generator
  }

  g.exponent = 1;
  for (const auto& gen : g.generators) g.exponent = std::lcm(g.exponent, gen.order);
  g.roots_.resize(g.exponent);
  for (std::uint64_t k = 0; k < g.exponent; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(g.exponent);
    g.roots_[k] = {std::cos(theta), std::sin(theta)};
  }

  const std::size_t r = g.generators.size();
  std::uint64_t count = 1;
  for (const auto& gen : g.generators) count *= gen.order;
  g.characters.reserve(count);
  g.conjugate_index.resize(count);

  std::vector<std::uint64_t> c(r, 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Character chi;
    chi.index = static_cast<std::uint32_t>(idx);
    chi.exponents = c;

    // conductor from the local structure of each prime-power factor
    std::uint64_t conductor = 1;
    for (std::size_t i = 0; i < r; ++i) {
      const GeneratorInfo& gi = info[i];
      unsigned f = 0;
      if (gi.kind == Kind::odd_cyclic) {
        if (c[i] != 0) f = gi.e - std::min(valuation(c[i], gi.p), gi.e - 1);
      } else if (gi.kind == Kind::minus_one) {
        const bool has_five = i + 1 < r && info[i + 1].kind == Kind::five;
        const std::uint64_t b = has_five ? c[i + 1] : 0;
        if (b != 0) {
          f = gi.e - valuation(b, 2);
        } else if (c[i] != 0) {
          f = 2;
        }
      } else {
        continue;  // folded into the minus_one entry
      }
      for (unsigned k = 0; k < f; ++k) conductor *= gi.p;
    }
    chi.conductor = conductor;

    // conjugate: negated exponents, mixed radix with the first generator fastest
    std::uint64_t conj = 0;
    for (std::size_t i = r; i-- > 0;) {
      const std::uint64_t ord = g.generators[i].order;
      conj = conj * ord + (ord - c[i]) % ord;
    }
    g.conjugate_index[idx] = static_cast<std::uint32_t>(conj);

    g.characters.push_back(std::move(chi));
    Character& stored = g.characters.back();
    stored.parity = q <= 2 ? 1 : (g.angle(stored, q - 1) == 0 ? 1 : -1);
    if (stored.conductor == q) g.primitive_index.push_back(stored.index);

    for (std::size_t i = 0; i < r; ++i) {
      if (++c[i] < g.generators[i].order) break;
      c[i] = 0;
    }
  }
  return g;
}

std::int64_t CharacterGroup::angle(const Character& chi, std::uint64_t n) const {
  if (q == 1) return 0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Local& loc = local_[i];
    const std::int64_t ind = loc.dlog[n % loc.modulus];
    if (ind < 0) return -1;
    const std::uint64_t ord = generators[i].order;
    const std::uint64_t k = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(chi.exponents[i]) * static_cast<std::uint64_t>(ind) % ord);
    total = (total + k * (exponent / ord)) % exponent;
  }
  // q even with 2 ∥ q contributes no generator but still kills even n
  if (q % 2 == 0 && n % 2 == 0) return -1;
  return static_cast<std::int64_t>(total);
}

std::complex<double> CharacterGroup::value(const Character& chi, std::uint64_t n) const {
  const std::int64_t k = angle(chi, n);
  return k < 0 ? std::complex<double>{} : roots_[static_cast<std::uint64_t>(k)];
}

std::vector<std::int64_t> CharacterGroup::angle_table(const Character& chi) const {
  std::vector<std::int64_t> table(q);
  for (std::uint64_t n = 0; n < q; ++n) table[n] = angle(chi, n);
  return table;
}

std::uint64_t conductor_brute_force(const CharacterGroup& group, const Character& chi) {
  const std::uint64_t q = group.q;
  for (const std::uint64_t c : divisors(factor_small(q))) {
    bool trivial = true;
    for (std::uint64_t n = 1; n < q && trivial; n += c) {
      if (std::gcd(n, q) != 1) continue;
      trivial = group.angle(chi, n) == 0;
    }
    if (trivial) return c;
  }
  return q;
}

GaussData gauss_root_data(const CharacterGroup& group, const Character& chi, int kappa) {
  if (chi.conductor != group.q) throw PreconditionError("gauss_root_data: character is not primitive");
  if (kappa % 2 != 0) throw PreconditionError("gauss_root_data: weight must be even");
  const std::uint64_t q = group.q;
  CompensatedComplexSum tau;
  for (std::uint64_t h = 0; h < q; ++h) {
    const std::int64_t k = group.angle(chi, h);
    if (k < 0) continue;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(h) / static_cast<double>(q);
    tau.add(group.root(static_cast<std::uint64_t>(k)) * std::complex<double>(std::cos(theta), std::sin(theta)));
  }
  GaussData out;
  out.gauss_sum = tau.value();
  const double i_kappa = (kappa / 2) % 2 == 0 ? 1.0 : -1.0;
  out.root_number = i_kappa * out.gauss_sum * out.gauss_sum / static_cast<double>(q);
  return out;
}

std::int64_t primitive_twist_sum(std::uint64_t q, std::uint64_t a, const MultiplicativeTables& tables) {
  if (q == 0 || q > tables.limit) throw PreconditionError("primitive_twist_sum: q outside the table range");
  if (std::gcd(a, q) != 1) throw PreconditionError("primitive_twist_sum: a must be coprime to q");
  // c | (q, a-1); a-1 may be 0, in which case every divisor of q qualifies
  const std::uint64_t g = a == 0 ? q : std::gcd(q, a - 1);
  std::int64_t total = 0;
  for (const std::uint64_t c : divisors(tables.factor(g))) {
    total += tables.mobius[q / c] * static_cast<std::int64_t>(tables.totient[c]);
  }
  return total;
}

std::complex<double> primitive_twist_sum_brute_force(const CharacterGroup& group, std::uint64_t a) {
  if (std::gcd(a, group.q) != 1) throw PreconditionError("primitive_twist_sum: a must be coprime to q");
  CompensatedComplexSum total;
  for (const std::uint32_t i : group.primitive_index) total.add(group.value(group.characters[i], a));
  return total.value();
}

}  // namespace twm
