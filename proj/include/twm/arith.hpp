#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace twm {

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Dense multiplicative-function tables for 1..limit from a single linear sieve pass.
/// Index 0 of every table is unused and holds 0.
struct MultiplicativeTables {
  std::uint32_t limit = 0;
  std::vector<std::uint32_t> primes;
  std::vector<std::int8_t> mobius;
  std::vector<std::uint32_t> totient;
  std::vector<std::uint32_t> divisor_count;
  std::vector<std::uint8_t> omega;
  std::vector<std::uint32_t> least_prime;

  /// Prime factorization; uses the least-prime table when n <= limit, trial division otherwise.
  Factorization factor(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;
};

MultiplicativeTables build_tables(std::uint32_t limit);

/// φ*(q): number of primitive characters mod q, as Σ_{c|q} μ(q/c) φ(c).
std::uint64_t primitive_character_count(std::uint64_t q, const MultiplicativeTables& tables);

std::vector<std::uint64_t> divisors(const Factorization& f);
std::uint64_t totient_of(const Factorization& f);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

}  // namespace twm
