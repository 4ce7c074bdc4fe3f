#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <numbers>

#include "fixtures.hpp"
#include "twm/error.hpp"
#include "twm/mellin.hpp"
#include "twm/summation.hpp"

using namespace twm;

namespace {
const MellinOptions bare{2.0, 1.0 / 16, 0.0, 1e-20};  // β = 0
}

TEST_SUITE("mellin") {
  TEST_CASE("single weight: limits and decay") {
    CHECK(std::abs(weight_single(0.0, 1e-6).value - 1.0) < 1e-6);
    CHECK(std::abs(weight_single(0.0, 1e3).value) < 1e-6);
    CHECK(std::abs(weight_single(2.5, 1e-6).value - 1.0) < 1e-6);
    CHECK_THROWS_AS(weight_single(0.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(weight_single(0.0, -1.0), PreconditionError);
  }

  TEST_CASE("single weight: step halving") {
    const MellinOptions coarse{2.0, 1.0 / 16, 1.0, 1e-20};
    const MellinOptions fine{2.0, 1.0 / 32, 1.0, 1e-20};
    for (const double x : {0.1, 1.0, 5.0})
      CHECK(std::abs(weight_single(1.0, x, 12, coarse).value - weight_single(1.0, x, 12, fine).value) < 1e-9);
    CHECK(weight_single(1.0, 1.0).step_error < 1e-9);
  }

  TEST_CASE("undamped weight equals the regularized incomplete gamma function") {
    // (1/2πi)∫ Γ(6+w)/Γ(6) y^{-w} dw/w = Γ(6, y)/Γ(6), y = 2πx
    const auto w = single_weight(0.0, 12, bare);
    for (double x = 1e-3; x < 20; x *= 1.6) {
      const double expect = boost::math::gamma_q(6.0, 2 * std::numbers::pi * x);
      REQUIRE(std::abs(w(x) - expect) < 1e-12);
    }
  }

  TEST_CASE("pair weight") {
    const Complex s1(0.5, 0.0), s2(0.5, 0.0);
    CHECK(std::abs(weight_pair(s1, s2, 1e-7).value - 1.0) < 1e-6);
    CHECK(std::abs(weight_pair(s1, s2, 1e6).value) < 1e-8);
    const Complex a(0.6, 0.3), b(0.7, -0.1);
    for (const double x : {0.01, 0.3, 2.0, 9.0})
      CHECK(std::abs(weight_pair(a, b, x).value - weight_pair(b, a, x).value) < 1e-14);
  }

  TEST_CASE("the certified bound dominates the weight") {
    for (const double t : {0.0, 3.0}) {
      const auto w = single_weight(t, 12);
      for (double x = 0.5; x < 1e5; x *= 2.3) REQUIRE(std::abs(w(x)) <= w.bound(x) * (1 + 1e-9));
      // each fixed c gives |W| <= M_c (e^ℓ x)^{-c}: the fitted C_c of the bound
      for (const double c : {1.0, 2.0, 4.0}) {
        const double logM = w.log_decay_constant(c);
        for (double x = 1.0; x < 1e4; x *= 3.1)
          REQUIRE(std::log(std::abs(w(x))) <= logM - c * (w.log_scale() + std::log(x)) + 1e-9);
      }
    }
  }

  TEST_CASE("log-log decay slope at large x") {
    const auto w = single_weight(0.0, 12);
    // least squares over [10^4, 10^6]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double x = 1e4; x <= 1e6 * 1.0001; x *= std::pow(10.0, 0.25), ++n) {
      const double lx = std::log(x), ly = std::log(std::abs(w(x)));
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("slope over [1e4,1e6]: " << slope);
    CHECK(slope <= -3.9);
  }

  TEST_CASE("tails and truncation lengths") {
    // divisor_tail bounds Σ_{n>N} d(n) n^{-a}
    const auto t = build_tables(1000000);
    CompensatedSum direct;
    for (std::uint32_t n = 1001; n <= 1000000; ++n) direct.add(t.divisor_count[n] * std::pow(double(n), -3.0));
    CHECK(direct.value() <= divisor_tail(1000, 3.0, 1));
    CHECK(divisor_tail(1000, 3.0, 1) < 10 * direct.value());

    const auto w = single_weight(0.0, 12, bare);
    const std::uint64_t n = w.truncation_length(0.5, 100.0, 1, 1e-12);
    CHECK(w.tail_bound(0.5, 100.0, n, 1) <= 1e-12);
    CHECK(w.tail_bound(0.5, 100.0, n / 2, 1) > 1e-12);
    // direct check of the certified tail against the actual one
    CompensatedSum tail;
    for (std::uint64_t m = n + 1; m <= std::min<std::uint64_t>(4 * n, 1000000); ++m)
      tail.add(t.divisor_count[m] * std::pow(double(m), -0.5) * std::abs(w(double(m) / 100.0)));
    CHECK(tail.value() <= w.tail_bound(0.5, 100.0, n, 1));
  }

  TEST_CASE("cached weight") {
    const auto w = single_weight(0.7, 12, bare);
    const CachedWeight cache(w, 1e-3, 50.0, 64);
    CHECK(cache.measured_error() < 1e-4);
    const CachedWeight finer(w, 1e-3, 50.0, 128);
    CHECK(finer.measured_error() < cache.measured_error() / 2);  // monotone slopes limit the order near extrema
    MESSAGE("cache error at 64 / 128 points per octave: " << cache.measured_error() << " / " << finer.measured_error());
    double worst = 0.0;
    for (double x = 1.3e-3; x < 49; x *= 1.17) worst = std::max(worst, std::abs(cache(x) - w(x)));
    CHECK(worst < 4 * cache.measured_error() + 1e-15);
    CHECK(cache(100.0) == w(100.0));  // outside the grid: exact
  }
}
