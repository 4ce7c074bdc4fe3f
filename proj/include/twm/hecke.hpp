#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "twm/arith.hpp"

namespace twm {

using BigInt = boost::multiprecision::cpp_int;

/// Normalized Hecke eigenvalues λ_f(n) = a(n) / n^{(κ-1)/2} for 1 <= n <= limit.
struct CoefficientTable {
  int kappa = 12;
  std::uint64_t limit = 0;
  std::vector<double> lambda;  // lambda[0] unused
  std::vector<BigInt> raw;     // unnormalized a(n); may be empty for imported real data

  double operator[](std::uint64_t n) const { return lambda[n]; }
};

/// Coefficients of Δ = q ∏(1-q^m)^24 up to `limit`, exact (raw) and normalized with κ = 12.
CoefficientTable build_delta_coefficients(std::uint64_t limit);

/// λ_f(n) for any n whose prime factors are within the table; beyond the stored range it is
/// rebuilt by multiplicativity and λ(p^{j+1}) = λ(p)λ(p^j) - λ(p^{j-1}).
/// Throws CapabilityError when a needed prime exceeds the table.
double coefficient_at(const CoefficientTable& table, std::uint64_t n, const MultiplicativeTables& tables);

/// λ_f(p^e) for prime p <= table.limit.
double prime_power_coefficient(const CoefficientTable& table, std::uint64_t p, unsigned e);

/// Plain-text import: header "kappa K", then lines "n raw". Requires n = 1..N contiguous,
/// raw(1) = 1, and the Deligne bound |λ(n)| <= d(n) (with 1e-9 relative slack).
CoefficientTable read_coefficients(std::istream& in, const MultiplicativeTables& tables);
void write_coefficients(std::ostream& out, const CoefficientTable& table);

}  // namespace twm
