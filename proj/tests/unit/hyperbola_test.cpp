#include <cmath>
#include <random>

#include "doctest.h"
#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/factorization.hpp"
#include "hyplab/hyperbola.hpp"
#include "oracles.hpp"

using namespace hyplab;
using S = FunctionSpec;

TEST_CASE("Threshold is exact") {
  const auto t = Threshold::real(2.5);
  CHECK(t.num() == 5);
  CHECK(t.den() == 2);
  CHECK(t.floor() == 2);
  CHECK(t.floor_div(11) == 4);
  CHECK(Threshold::real(7.0).is_integer());
  CHECK(Threshold::integer(10).floor_div(105) == 10);
  const auto third = Threshold::real(1.0 / 3.0 * 30.0);  // not exactly 10
  CHECK(third.to_double() == 1.0 / 3.0 * 30.0);
  CHECK_THROWS_AS(Threshold::real(0.5), PreconditionError);
  CHECK_THROWS_AS(Threshold::real(NAN), PreconditionError);
}

TEST_CASE("short_hyperbola examples") {
  const auto h = short_hyperbola(S::one(), S::one(), 100, 10, Threshold::integer(10));
  CHECK(h.total.as_int64() == 56);
  CHECK(h.boundary_S2.as_int64() == 0);  // 110 / 10 is an integer

  for (auto [x, y, t] : {std::tuple{1000ull, 30ull, 40.0}, {5000ull, 100ull, 123.75}, {99ull, 10ull, 10.0}})
    CHECK(short_hyperbola(S::mobius(), S::one(), x, y, Threshold::real(t)).total.as_int64() == 0);

  // (x/T, (x+y)/T] = (9.09.., 10] holds 10 = (x+y)/T: empty boundary
  CHECK(short_hyperbola(S::tau_m(2), S::one(), 1000, 100, Threshold::integer(110)).boundary_S2.as_int64() == 0);
}

TEST_CASE("short_hyperbola matches brute force") {
  std::mt19937_64 rng(11);
  const std::vector<std::pair<S, S>> pairs = {
      {S::one(), S::one()},
      {S::tau_m(3), S::one()},
      {S::mu_k(2), S::one()},
      {S::tau_m(2), S::mu_k(3)},
      {S::pointwise_product(S::mu_k(2), S::two_pow_omega()), S::one()},
      {S::log_pow(1), S::one()},
      {S::lambda_k(1), S::tau_m(2)},
  };
  std::uniform_real_distribution<double> unit(0, 1);
  for (const auto& [f, g] : pairs) {
    CAPTURE(f.canonical());
    CAPTURE(g.canonical());
    for (int i = 0; i < 25; ++i) {
      const auto x = static_cast<std::uint64_t>(std::exp(std::log(10.0) + unit(rng) * std::log(2e5)));
      const auto y = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::exp(unit(rng) * std::log(static_cast<double>(std::min<std::uint64_t>(x, 20000))))));
      const double lo = std::max(static_cast<double>(y), static_cast<double>(x) / static_cast<double>(y));
      double t = std::exp(std::log(lo) + unit(rng) * (std::log(static_cast<double>(x)) - std::log(lo)));
      t = std::clamp(t, lo, static_cast<double>(x));
      if (i % 3 == 0) t = std::ceil(t) <= static_cast<double>(x) ? std::ceil(t) : std::floor(t);
      CAPTURE(x);
      CAPTURE(y);
      CAPTURE(t);
      const auto T = Threshold::real(t);
      if (T < y || !T.times_at_least(y, x)) continue;
      const auto h = short_hyperbola(f, g, x, y, T);
      const auto want = short_sum_bruteforce(S::convolution(f, g), x, y);
      if (want.is_exact())
        REQUIRE(h.total == want);
      else
        REQUIRE(h.total.to_double() == doctest::Approx(want.to_double()).epsilon(1e-9).scale(1.0));
      REQUIRE(values_agree(h.total, h.term_d + h.term_k + h.boundary_S2, 0));

      // boundary is live only when (x/T, (x+y)/T] holds an integer other than (x+y)/T
      const std::uint64_t K = T.floor_div(x), q = T.floor_div(x + y);
      const bool endpoint = static_cast<int128>(x + y) * T.den() == T.num() * static_cast<int128>(q);
      if (q == K || endpoint) REQUIRE(h.boundary_S2.to_double() == 0.0);
      REQUIRE(h.outer_terms == T.floor() + K + (q > K ? 1 : 0));
      REQUIRE(static_cast<double>(h.outer_terms) <= t + static_cast<double>(x) / t + 1);
    }
  }
}

TEST_CASE("short_hyperbola inner-sum strategies agree") {
  const std::uint64_t x = 3'000'000, y = 20'000;
  const auto T = Threshold::real(y * 1.7);
  HyperbolaOptions a, b, c;
  b.prefix_limit = 0;
  b.sieve_window_min = 1;
  c.prefix_limit = 1000;
  c.sieve_window_min = 1'000'000;
  c.compute.threads = 3;
  for (const auto& f : {S::tau_m(3), S::lambda_k(1)}) {
    const auto ra = short_hyperbola(f, S::one(), x, y, T, a);
    const auto rb = short_hyperbola(f, S::tau_m(2), x, y, T, b);
    const auto rc = short_hyperbola(f, S::tau_m(2), x, y, T, c);
    const auto rd = short_hyperbola(f, S::tau_m(2), x, y, T, a);
    CHECK(values_agree(ra.total, short_sum_bruteforce(S::convolution(f, S::one()), x, y), 1e-12));
    CHECK(values_agree(rb.total, rc.total, 1e-12));
    CHECK(values_agree(rb.total, rd.total, 1e-12));
    CHECK(values_agree(rd.total, short_sum_bruteforce(S::convolution(f, S::tau_m(2)), x, y), 1e-12));
  }
}

TEST_CASE("short_hyperbola preconditions") {
  CHECK_THROWS_WITH_AS(short_hyperbola(S::one(), S::one(), 100, 20, Threshold::integer(10)),
                       doctest::Contains("T >= y"), PreconditionError);
  CHECK_THROWS_WITH_AS(short_hyperbola(S::one(), S::one(), 1000, 5, Threshold::integer(100)),
                       doctest::Contains("T >= x/y"), PreconditionError);
  CHECK_THROWS_WITH_AS(short_hyperbola(S::one(), S::one(), 10, 10, Threshold::integer(11)),
                       doctest::Contains("T <= x"), PreconditionError);
  CHECK_THROWS_AS(short_hyperbola(S::one(), S::one(), 10, 0, Threshold::integer(5)), PreconditionError);
}

TEST_CASE("long_hyperbola") {
  CHECK(long_hyperbola(S::one(), S::one(), 100, Threshold::integer(10)).as_int64() == 482);
  CHECK(long_hyperbola(S::mobius(), S::one(), 50, Threshold::integer(7)).as_int64() == 1);
  for (std::uint64_t x : {1, 2, 97, 1000, 65536}) {
    const auto cbrt = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(x)));
    const auto sq = isqrt(x);
    const Value ref = short_sum_bruteforce(S::tau_m(2), 0, x);
    for (std::uint64_t t : {std::uint64_t{1}, std::max<std::uint64_t>(1, cbrt), sq, x})
      CHECK(long_hyperbola(S::one(), S::one(), x, Threshold::integer(t)) == ref);
    const Value lr = short_sum_bruteforce(S::convolution(S::lambda_k(1), S::one()), 0, x);
    CHECK(values_agree(long_hyperbola(S::lambda_k(1), S::one(), x, Threshold::real(static_cast<double>(sq) + 0.5 < static_cast<double>(x) ? static_cast<double>(sq) + 0.5 : 1.0)), lr, 1e-9));
  }
}

TEST_CASE("psi and distance") {
  CHECK(psi(0.25) == -0.25);
  CHECK(psi(3) == -0.5);
  CHECK(dist_to_nearest_int(0.6) == doctest::Approx(0.4));
  CHECK(dist_to_nearest_int(17.0) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    CHECK(psi(t + 1) == doctest::Approx(psi(t)).epsilon(1e-12).scale(1.0));
    CHECK(psi(t) >= -0.5);
    CHECK(psi(t) < 0.5);
    CHECK(dist_to_nearest_int(t) <= 0.5);
  }
}

TEST_CASE("sigma_F") {
  double want = 0;  // direct evaluation of the five terms
  for (int n = 6; n <= 10; ++n) want += psi(103.0 / n) - psi(100.0 / n);
  CHECK(sigma_F(S::one(), 5, 100, 3) == doctest::Approx(want).epsilon(1e-12));
  CHECK(sigma_F(S::one(), 5, 100, 3) == doctest::Approx(0.9369).epsilon(1e-4));
  CHECK(sigma_F(S::one(), 5, 100, 0) == 0.0);
  CHECK(sigma_F(S::tau_m(2), 200, 10'000, 50) ==
        doctest::Approx([] {
          double s = 0;
          for (int n = 201; n <= 400; ++n) s += oracle::tau_m(2, n) * (psi(10050.0 / n) - psi(10000.0 / n));
          return s;
        }()).epsilon(1e-10));
  CHECK_THROWS_AS(sigma_F(S::one(), 3, 100, 3), PreconditionError);
  CHECK_THROWS_AS(sigma_F(S::one(), 101, 100, 3), PreconditionError);
}
