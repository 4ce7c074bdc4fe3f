#include <doctest.h>

#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "twm/error.hpp"

using namespace twm;
using twm::test::delta;
using twm::test::tables;

namespace {

// q ∏_{m<=N} (1 - q^m)^24 by schoolbook multiplication, one factor at a time
std::vector<BigInt> direct_expansion(std::size_t degree) {
  std::vector<BigInt> c(degree, 0);  // c[i] = coefficient of q^i in ∏(1-q^m)^24
  c[0] = 1;
  for (std::size_t m = 1; m < degree; ++m)
    for (int rep = 0; rep < 24; ++rep)
      for (std::size_t i = degree - 1; i >= m; --i) c[i] -= c[i - m];
  std::vector<BigInt> tau(degree + 1, 0);
  for (std::size_t n = 1; n <= degree; ++n) tau[n] = c[n - 1];
  return tau;
}

}  // namespace

TEST_SUITE("hecke") {
  TEST_CASE("raw coefficients against the direct product expansion") {
    const auto tau = direct_expansion(80);
    const auto& t = delta();
    CHECK(t.raw[1] == 1);
    CHECK(t.raw[2] == -24);
    CHECK(t.raw[3] == 252);
    CHECK(t.raw[5] == 4830);
    for (std::size_t n = 1; n <= 80; ++n) REQUIRE(t.raw[n] == tau[n]);
    CHECK(t.lambda[1] == 1.0);
  }

  TEST_CASE("Ramanujan congruence τ(n) ≡ σ_11(n) mod 691 for n <= 10^5") {
    const auto& t = delta();
    const auto& tb = tables();
    for (std::uint64_t n = 1; n <= t.limit; ++n) {
      std::uint64_t sigma = 0;
      for (const auto d : divisors(tb.factor(n))) sigma = (sigma + pow_mod(d % 691, 11, 691)) % 691;
      BigInt r = t.raw[n] % 691;
      if (r < 0) r += 691;
      REQUIRE(r == sigma);
    }
  }

  TEST_CASE("exact multiplicativity of raw coefficients") {
    const auto& t = delta();
    for (std::uint64_t m = 2; m <= 300; ++m)
      for (std::uint64_t n = m + 1; m * n <= t.limit; n += 7)
        if (std::gcd(m, n) == 1) REQUIRE(t.raw[m * n] == t.raw[m] * t.raw[n]);
  }

  TEST_CASE("Deligne bound up to 10^5") {
    const auto& t = delta();
    const auto& tb = tables();
    for (std::uint64_t n = 1; n <= t.limit; ++n) REQUIRE(std::abs(t.lambda[n]) <= tb.divisor_count[n] * (1 + 1e-12));
  }

  TEST_CASE("Hecke relations for m, n <= 300") {
    const auto& t = delta();
    const auto& tb = tables();
    double worst = 0.0;
    for (std::uint64_t m = 1; m <= 300; ++m)
      for (std::uint64_t n = 1; n <= 300; ++n) {
        double rhs = 0.0;
        for (const auto d : divisors(tb.factor(std::gcd(m, n)))) rhs += t.lambda[m * n / (d * d)];
        const double lhs = t.lambda[m] * t.lambda[n];
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("coefficient_at beyond the table") {
    const auto small = build_delta_coefficients(1000);
    const auto& big = delta();
    const auto& tb = tables();
    CHECK(coefficient_at(small, 1, tb) == 1.0);
    CHECK(coefficient_at(small, 6, tb) == doctest::Approx(small.lambda[2] * small.lambda[3]).epsilon(1e-14));
    CHECK(coefficient_at(small, 4, tb) == doctest::Approx(small.lambda[2] * small.lambda[2] - 1).epsilon(1e-14));
    for (std::uint64_t n = 1001; n <= 20000; ++n) {
      bool covered = true;
      for (const auto& [p, e] : tb.factor(n)) covered = covered && p <= 1000;
      if (!covered) continue;
      REQUIRE(coefficient_at(small, n, tb) == doctest::Approx(big.lambda[n]).epsilon(1e-11));
    }
    CHECK_THROWS_AS(coefficient_at(small, 1009 * 2, tb), CapabilityError);
    CHECK(prime_power_coefficient(small, 2, 15) == doctest::Approx(big.lambda[32768]).epsilon(1e-11));
  }

  TEST_CASE("coefficient file round trip and validation") {
    const auto small = build_delta_coefficients(200);
    std::stringstream io;
    write_coefficients(io, small);
    const auto back = read_coefficients(io, tables());
    CHECK(back.kappa == 12);
    REQUIRE(back.limit == 200);
    for (std::uint64_t n = 1; n <= 200; ++n) REQUIRE(back.raw[n] == small.raw[n]);

    std::stringstream gap("kappa 12\n1 1\n3 252\n");
    CHECK_THROWS_AS(read_coefficients(gap, tables()), PreconditionError);
    std::stringstream wild("kappa 12\n1 1\n2 1000000\n");
    CHECK_THROWS_AS(read_coefficients(wild, tables()), PreconditionError);
    std::stringstream first("kappa 12\n1 2\n");
    CHECK_THROWS_AS(read_coefficients(first, tables()), PreconditionError);
  }
}
