#include <cmath>
#include <random>

#include "doctest.h"
#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/hooley.hpp"
#include "oracles.hpp"

using namespace hyplab;

TEST_CASE("divisors") {
  CHECK(divisors(1).divisors == std::vector<std::uint64_t>{1});
  CHECK(divisors(12).divisors == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto dl = divisors(n);
    REQUIRE(dl.divisors.size() == static_cast<std::size_t>(evaluate_point(FunctionSpec::tau_m(2), n).as_int64()));
    REQUIRE(dl.divisors.front() == 1);
    REQUIRE(dl.divisors.back() == n);
    REQUIRE(std::is_sorted(dl.divisors.begin(), dl.divisors.end()));
    if (n % 37 == 0) REQUIRE(dl.divisors == oracle::divisors(n));
  }
}

TEST_CASE("less_than_e_times near convergents") {
  CHECK(less_than_e_times(2, 1));
  CHECK_FALSE(less_than_e_times(3, 1));
  CHECK_FALSE(less_than_e_times(193, 71));
  CHECK(less_than_e_times(1264, 465));
  CHECK(less_than_e_times(2721, 1001));
  CHECK_FALSE(less_than_e_times(2721, 1000));
  // consecutive convergents of e lie on opposite sides of it
  CHECK(less_than_e_times(848456353, 312129649));
  CHECK_FALSE(less_than_e_times(438351041, 161260336));
  CHECK(less_than_e_times(2816596318483412024ull, 1036167879649219395ull));
  CHECK_FALSE(less_than_e_times(2922842896378005707ull, 1075253811351460636ull));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> b(1, 1'000'000);
  const long double e = std::exp(1.0L);
  for (int i = 0; i < 20'000; ++i) {
    const std::uint64_t q = b(rng);
    const std::uint64_t p = static_cast<std::uint64_t>(e * q) + (i % 3) - 1;
    REQUIRE(less_than_e_times(p, q) == (static_cast<long double>(p) < e * q));
  }
}

TEST_CASE("delta_r examples") {
  CHECK(delta_r(1, 2).value == 1);
  CHECK(delta_r(2, 2).value == 2);
  CHECK(delta_r(12, 2).value == 3);
  CHECK(delta_r(6, 2).value == 2);
  CHECK(delta_r(1, 3).value == 1);
  CHECK(delta_r(1, 4).value == 1);
  CHECK(delta_r_grid_oracle(1, 2, 1e-4) == 1);
  CHECK(delta_r_grid_oracle(1, 3, 1e-4) == 1);
  CHECK(delta_r_grid_oracle(12, 2, 1e-4) == 3);
}

TEST_CASE("delta_r against tuple brute force") {
  for (std::uint64_t n = 1; n <= 400; ++n) {
    CAPTURE(n);
    REQUIRE(delta_r(n, 2).value == static_cast<std::uint64_t>(oracle::delta_brute(n, 2)));
    REQUIRE(delta_r(n, 3).value == static_cast<std::uint64_t>(oracle::delta_brute(n, 3)));
    if (n <= 120) REQUIRE(delta_r(n, 4).value == static_cast<std::uint64_t>(oracle::delta_brute(n, 4)));
  }
}

TEST_CASE("delta_r agrees with the grid oracle") {
  for (std::uint64_t n = 1; n <= 600; ++n) {
    CAPTURE(n);
    REQUIRE(delta_r(n, 2).value == delta_r_grid_oracle(n, 2, 1e-4));
    REQUIRE(delta_r(n, 3).value == delta_r_grid_oracle(n, 3, 1e-4));
  }
}

TEST_CASE("witness windows reproduce the count") {
  for (std::uint64_t n : {1ull, 2ull, 12ull, 360ull, 720ull, 1001ull, 5040ull, 27720ull, 65536ull, 999983ull}) {
    for (int r = 2; r <= 4; ++r) {
      CAPTURE(n);
      CAPTURE(r);
      const auto d = delta_r(n, r);
      REQUIRE(d.witness.size() == static_cast<std::size_t>(r - 1));
      CHECK(window_count(n, d.witness) == d.value);
    }
  }
}

TEST_CASE("delta_r inequalities") {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto d2 = delta_r(n, 2).value;
    REQUIRE(d2 >= 1);
    REQUIRE(d2 <= divisors(n).divisors.size());
    if (n <= 2000) {
      const auto d3 = delta_r(n, 3).value;
      REQUIRE(d3 >= d2);
      REQUIRE(delta_r(n, 4).value >= d3);
    }
  }
}

TEST_CASE("dyadic sums and the dyadic divisor inequality") {
  CHECK(dyadic_divisor_tau_sum(12, 1, 2) == 2);
  CHECK(dyadic_divisor_tau_sum(1, 3, 1) == 0);
  CHECK(dyadic_divisor_tau_sum(12, 2, 2) == 5);

  const auto a = lemma5_check(12, 1, 2);
  CHECK(a.lhs == 2);
  CHECK(a.rhs == 3.0);
  CHECK(a.holds);
  const auto b = lemma5_check(1, 2, 1);
  CHECK(b.lhs == 0);
  CHECK(b.holds);

  for (std::uint64_t n = 1; n <= 1500; ++n)
    for (int r = 1; r <= 3; ++r)
      for (std::uint64_t N = 1; N <= 2 * n; N *= 2) {
        std::uint64_t brute = 0;
        for (auto d : oracle::divisors(n))
          if (d > N && d <= 2 * N) brute += static_cast<std::uint64_t>(oracle::tau_m(r, d));
        const auto c = lemma5_check(n, r, N);
        REQUIRE(c.lhs == brute);
        REQUIRE(c.holds);
      }
}

TEST_CASE("delta sums") {
  CHECK(delta_short_sum(2, 0, 1) == 1);
  CHECK(delta_short_sum(2, 10, 2) == 4);
  CHECK(delta_short_sum(2, 10, 0) == 0);
  // frozen from an independent high-precision computation
  CHECK(delta_weighted_prefix(2, 100) == doctest::Approx(8.28728238460653).epsilon(1e-13));

  std::uint64_t brute = 0;
  for (std::uint64_t n = 5001; n <= 6000; ++n) brute += delta_r(n, 3).value;
  CHECK(delta_short_sum(3, 5000, 1000) == brute);

  const ComputeOptions one{1 << 24, 1}, many{3000, 4};
  CHECK(delta_short_sum(2, 1'000'000, 50'000, one) == delta_short_sum(2, 1'000'000, 50'000, many));
  CHECK(delta_weighted_prefix(3, 30'000, one) == delta_weighted_prefix(3, 30'000, many));
}

TEST_CASE("delta error paths") {
  CHECK_THROWS_AS(delta_r(12, 1), PreconditionError);
  CHECK_THROWS_AS(delta_r(12, 5), PreconditionError);
  CHECK_THROWS_AS(delta_r(0, 2), PreconditionError);
  CHECK_THROWS_AS(delta_r(720720, 4), ResourceError);
  ComputeOptions tiny;
  tiny.work_cap = 100;
  CHECK_THROWS_AS(delta_r(5040, 3, tiny), ResourceError);
  CHECK_THROWS_AS(delta_r_grid_oracle(12, 4, 1e-4), PreconditionError);
  CHECK_THROWS_AS(delta_r_grid_oracle(12, 2, 1e-2), PreconditionError);
  CHECK_THROWS_AS(lemma5_check(12, 4, 1), PreconditionError);
}
