#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twm/arith.hpp"

namespace twm {

struct Character {
  std::uint32_t index = 0;               // position in CharacterGroup::characters
  std::vector<std::uint64_t> exponents;  // one per group generator, 0 <= c_i < order_i
  std::uint64_t conductor = 1;
  int parity = 1;                        // χ(-1)
};

struct GaussData {
  std::complex<double> gauss_sum;
  std::complex<double> root_number;  // ι_χ = i^κ τ(χ)² / q
};

/// Dual group of (Z/qZ)^*. Values are exact rational angles k/Λ (Λ = group exponent),
/// turned into floating point only through root().
class CharacterGroup {
 public:
  struct Generator {
    std::uint64_t residue;  // CRT lift: the local generator on one prime-power factor, 1 elsewhere
    std::uint64_t order;
  };

  std::uint64_t q = 1;
  std::uint64_t exponent = 1;  // Λ
  std::vector<Generator> generators;
  std::vector<Character> characters;
  std::vector<std::uint32_t> primitive_index;
  std::vector<std::uint32_t> conjugate_index;

  /// k with χ(n) = e(k/Λ), or -1 when gcd(n, q) > 1.
  std::int64_t angle(const Character& chi, std::uint64_t n) const;
  std::complex<double> value(const Character& chi, std::uint64_t n) const;
  std::complex<double> root(std::uint64_t k) const { return roots_[k % exponent]; }
  /// angle(chi, r) for r = 0..q-1.
  std::vector<std::int64_t> angle_table(const Character& chi) const;

  const Character& conjugate(const Character& chi) const { return characters[conjugate_index[chi.index]]; }
  bool has_primitive() const { return q % 4 != 2; }

 private:
  friend CharacterGroup build_group(std::uint64_t q);

  struct Local {
    std::uint64_t modulus;           // p^e of the factor this generator lives on
    std::vector<std::int64_t> dlog;  // residue mod p^e -> discrete log, -1 on non-units
  };
  std::vector<Local> local_;  // parallel to generators
  std::vector<std::complex<double>> roots_;
};

CharacterGroup build_group(std::uint64_t q);

/// Smallest c | q with χ(n) = 1 whenever n ≡ 1 (mod c) and gcd(n, q) = 1, found by testing
/// every divisor; the group build uses the local formula instead.
std::uint64_t conductor_brute_force(const CharacterGroup& group, const Character& chi);

GaussData gauss_root_data(const CharacterGroup& group, const Character& chi, int kappa);

/// Σ_{c | (q, a-1)} μ(q/c) φ(c) = Σ*_{χ mod q} χ(a).
std::int64_t primitive_twist_sum(std::uint64_t q, std::uint64_t a, const MultiplicativeTables& tables);
std::complex<double> primitive_twist_sum_brute_force(const CharacterGroup& group, std::uint64_t a);

}  // namespace twm
