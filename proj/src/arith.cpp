#include "twm/arith.hpp"

#include <algorithm>
#include <string>

#include "twm/error.hpp"

namespace twm {

MultiplicativeTables build_tables(std::uint32_t limit) {
  if (limit < 2) throw PreconditionError("build_tables: limit must be at least 2");

  MultiplicativeTables t;
  t.limit = limit;
  const std::size_t size = std::size_t{limit} + 1;
  t.mobius.assign(size, 0);
  t.totient.assign(size, 0);
  t.divisor_count.assign(size, 0);
  t.omega.assign(size, 0);
  t.least_prime.assign(size, 0);
  // exponent of the least prime in n; needed to update d(n) in one pass
  std::vector<std::uint8_t> lp_exponent(size, 0);

  t.mobius[1] = 1;
  t.totient[1] = 1;
  t.divisor_count[1] = 1;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (t.least_prime[i] == 0) {
      t.least_prime[i] = i;
      t.primes.push_back(i);
      t.mobius[i] = -1;
      t.totient[i] = i - 1;
      t.divisor_count[i] = 2;
      t.omega[i] = 1;
      lp_exponent[i] = 1;
    }
    for (const std::uint32_t p : t.primes) {
      const std::uint64_t m = std::uint64_t{p} * i;
      if (p > t.least_prime[i] || m > limit) break;
      t.least_prime[m] = p;
      if (p == t.least_prime[i]) {
        t.mobius[m] = 0;
        t.totient[m] = t.totient[i] * p;
        lp_exponent[m] = lp_exponent[i] + 1;
        t.divisor_count[m] = t.divisor_count[i] / (lp_exponent[i] + 1) * (lp_exponent[m] + 1);
        t.omega[m] = t.omega[i];
      } else {
        t.mobius[m] = static_cast<std::int8_t>(-t.mobius[i]);
        t.totient[m] = t.totient[i] * (p - 1);
        lp_exponent[m] = 1;
        t.divisor_count[m] = t.divisor_count[i] * 2;
        t.omega[m] = static_cast<std::uint8_t>(t.omega[i] + 1);
      }
    }
  }
  return t;
}

Factorization MultiplicativeTables::factor(std::uint64_t n) const {
  Factorization f;
  if (n == 0) throw PreconditionError("factor: n must be positive");
  if (n <= limit) {
    while (n > 1) {
      const std::uint32_t p = least_prime[n];
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      f.emplace_back(p, e);
    }
    return f;
  }
  for (const std::uint32_t p : primes) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) {
    const std::uint64_t lim = limit;
    if (lim * lim < n)
      throw CapabilityError("factor: " + std::to_string(n) + " has a cofactor beyond the sieve range", n);
    f.emplace_back(n, 1);
  }
  return f;
}

bool MultiplicativeTables::is_prime(std::uint64_t n) const {
  if (n < 2) return false;
  if (n <= limit) return least_prime[n] == n;
  const Factorization f = factor(n);
  return f.size() == 1 && f[0].second == 1;
}

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> d{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = d.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::uint64_t totient_of(const Factorization& f) {
  std::uint64_t phi = 1;
  for (const auto& [p, e] : f) {
    phi *= p - 1;
    for (unsigned k = 1; k < e; ++k) phi *= p;
  }
  return phi;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t primitive_character_count(std::uint64_t q, const MultiplicativeTables& tables) {
  if (q == 0) throw PreconditionError("primitive_character_count: q must be positive");
  if (q > tables.limit)
    throw PreconditionError("primitive_character_count: q exceeds the table limit");
  std::int64_t total = 0;
  for (const std::uint64_t c : divisors(tables.factor(q))) {
    total += tables.mobius[q / c] * static_cast<std::int64_t>(tables.totient[c]);
  }
  return static_cast<std::uint64_t>(total);
}

}  // namespace twm
