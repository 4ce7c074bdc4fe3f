#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "twm/dirichlet.hpp"
#include "twm/error.hpp"

using namespace twm;

namespace {

// trial-division oracle: (μ, φ, d, ω)
struct Naive {
  int mu;
  std::uint64_t phi, d, omega;
};
Naive naive(std::uint64_t n) {
  Naive r{1, n, 1, 0};
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    r.mu = e > 1 ? 0 : -r.mu;
    r.phi = r.phi / p * (p - 1);
    r.d *= e + 1;
    ++r.omega;
  }
  if (n > 1) {
    r.mu = -r.mu;
    r.phi = r.phi / n * (n - 1);
    r.d *= 2;
    ++r.omega;
  }
  return r;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("small tables") {
    const auto t = build_tables(10);
    CHECK(t.primes == std::vector<std::uint32_t>{2, 3, 5, 7});
    const auto big = build_tables(100);
    CHECK(big.mobius[30] == -1);
    CHECK(big.totient[9] == 6);
    CHECK(big.divisor_count[12] == 6);
    CHECK_THROWS_AS(build_tables(1), PreconditionError);
  }

  TEST_CASE("sieve agrees with trial division up to 10^4") {
    const auto t = build_tables(10000);
    for (std::uint32_t n = 1; n <= 10000; ++n) {
      const Naive r = naive(n);
      REQUIRE(t.mobius[n] == r.mu);
      REQUIRE(t.totient[n] == r.phi);
      REQUIRE(t.divisor_count[n] == r.d);
      REQUIRE(t.omega[n] == r.omega);
      REQUIRE(t.is_prime(n) == (n > 1 && r.d == 2));
    }
  }

  TEST_CASE("Möbius sums vanish") {
    const auto t = build_tables(10000);
    for (std::uint32_t n = 2; n <= 10000; ++n) {
      int s = 0;
      for (const auto d : divisors(t.factor(n))) s += t.mobius[d];
      REQUIRE(s == 0);
    }
  }

  TEST_CASE("factor beyond the table uses trial division") {
    const auto t = build_tables(1100);
    const std::uint64_t n = 999983ull * 1009ull;
    const auto f = t.factor(n);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == std::pair<std::uint64_t, unsigned>{1009, 1});
    CHECK(f[1] == std::pair<std::uint64_t, unsigned>{999983, 1});
    CHECK(t.is_prime(999983));
    CHECK(totient_of(f) == 1008ull * 999982ull);
    // two prime factors above the table cannot be certified
    CHECK_THROWS_AS(t.factor(1103ull * 1109ull * 1117ull), CapabilityError);
  }

  TEST_CASE("primitive character count") {
    const auto t = build_tables(20000);
    CHECK(primitive_character_count(1, t) == 1);
    CHECK(primitive_character_count(5, t) == 3);
    CHECK(primitive_character_count(8, t) == 2);
    for (std::uint64_t q = 1; q <= 10000; ++q) REQUIRE((primitive_character_count(q, t) == 0) == (q % 4 == 2));
  }

  TEST_CASE("primitive character count matches enumeration") {
    const auto t = build_tables(1000);
    for (std::uint64_t q = 1; q <= 300; ++q) {
      const auto g = build_group(q);
      std::uint64_t count = 0;
      for (const auto& chi : g.characters) count += conductor_brute_force(g, chi) == q;
      REQUIRE(primitive_character_count(q, t) == count);
    }
  }

  TEST_CASE("pow_mod") {
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(pow_mod(3, 0, 7) == 1);
    const std::uint64_t p = 4611686018427387847ull;
    CHECK(pow_mod(5, p - 1, p) == 1);  // Fermat on a 62-bit prime
  }
}
