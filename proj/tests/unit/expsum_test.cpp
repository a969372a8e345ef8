#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/expsum.hpp"
#include "hyplab/hyperbola.hpp"
#include "oracles.hpp"

using namespace hyplab;
using S = FunctionSpec;

namespace {

// naive sum_{N<n<=2N} tau_m(n) min(1, 1/(H ||z/n||)) in long double
double prop1_naive(long double z, std::uint64_t N, std::uint64_t H, int m) {
  long double s = 0;
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
    const long double q = z / n;
    const long double d = std::fabs(q - std::nearbyint(q));
    const long double term = d == 0 ? 1.0L : std::min(1.0L, 1.0L / (H * d));
    s += oracle::tau_m(m, n) * term;
  }
  return static_cast<double>(s);
}

// sum f(n) (P_H(b) - P_H(a)) by the real sine series in long double
double integral_oracle(const oracle::RealFn& f, std::uint64_t N, std::uint64_t x, std::uint64_t y, std::uint64_t H) {
  long double s = 0;
  const long double pi = std::numbers::pi_v<long double>;
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
    long double d = 0;
    for (std::uint64_t h = 1; h <= H; ++h) {
      const long double pb = static_cast<long double>((h * ((x + y) % n)) % n) / n;
      const long double pa = static_cast<long double>((h * (x % n)) % n) / n;
      d -= (std::sin(2 * pi * pb) - std::sin(2 * pi * pa)) / (pi * h);
    }
    s += f(n) * d;
  }
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("truncated_psi") {
  for (std::uint64_t H : {1, 4, 17, 64}) CHECK(std::abs(truncated_psi(0.5, H)) < 1e-15);
  CHECK(truncated_psi(0.25, 1) == doctest::Approx(-1.0 / std::numbers::pi));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
  for (int i = 0; i < 500; ++i) {
    const double t = u(rng);
    const std::uint64_t H = 1 + i % 70;
    REQUIRE(truncated_psi(1 - t, H) == doctest::Approx(-truncated_psi(t, H)).epsilon(1e-12).scale(1.0));
    REQUIRE(truncated_psi(t + 3, H) == doctest::Approx(truncated_psi(t, H)).epsilon(1e-12).scale(1.0));
  }
  // at t = 1/4 the error sits under the envelope with a small constant
  const double err = std::abs(psi(0.25) - truncated_psi(0.25, 64));
  CHECK(err <= 0.5 * std::min(1.0, 1.0 / (64 * 0.25)));
  // at a jump point the partial sums give 0, the midpoint of the jump
  CHECK(truncated_psi(2.0, 10) == 0.0);
  CHECK_THROWS_AS(truncated_psi(0.3, 0), PreconditionError);
}

TEST_CASE("psi truncation profile") {
  const auto grid = open_unit_grid(10'000);
  // frozen from an independent vectorised evaluation
  const double frozen[] = {0.4995500000493481, 0.4983500024608194, 0.49355014712109097};
  double prev = 1e9;
  int i = 0;
  for (std::uint64_t H : {4, 16, 64}) {
    const auto fit = psi_truncation_error_profile(H, grid);
    CHECK(fit.size() == 10'000);
    CHECK(fit.fitted_constant == doctest::Approx(frozen[i++]).epsilon(1e-9));
    CHECK(fit.fitted_constant <= prev);
    prev = fit.fitted_constant;
    // near 1/2 the error is at most 1/(2H) plus slack
    const double mid = std::abs(psi(0.49995) - truncated_psi(0.49995, H));
    CHECK(mid <= 1.0 / (2.0 * H) + 1e-3);
  }
  const double bad[] = {0.3, 1.0 - 1e-7};
  CHECK_THROWS_AS(psi_truncation_error_profile(4, bad), PreconditionError);
}

TEST_CASE("fit scaling") {
  const auto grid = open_unit_grid(200);
  const auto fit = psi_truncation_error_profile(8, grid);
  for (double c : {1.0, 2.0, 10.0}) {
    std::vector<double> env = fit.envelope;
    for (auto& e : env) e *= c;
    const auto scaled = make_envelope_fit("s", fit.coordinates, fit.grid, fit.lhs, env);
    CHECK(scaled.fitted_constant == doctest::Approx(fit.fitted_constant / c));
    for (std::size_t i = 0; i < scaled.size(); ++i)
      CHECK(std::abs(scaled.lhs[i]) <= scaled.fitted_constant * scaled.envelope[i] * (1 + 1e-15));
  }
  CHECK_THROWS_AS(make_envelope_fit("z", {"t"}, {{1.0}}, {1.0}, {0.0}), DomainError);
}

TEST_CASE("sawtooth split reconciles") {
  const auto zero = lemma2_decomposition(S::one(), 5, 100, 0, 8);
  CHECK(zero.integral_term == 0.0);
  CHECK(zero.remainder == 0.0);

  const auto a = lemma2_decomposition(S::one(), 5, 100, 3, 8);
  CHECK(a.sigma == doctest::Approx(0.9369).epsilon(1e-4));
  CHECK(a.integral_term + a.remainder == doctest::Approx(a.sigma).epsilon(1e-12).scale(1.0));
  CHECK(a.integral_term == doctest::Approx(integral_oracle([](std::uint64_t) { return 1.0; }, 5, 100, 3, 8)).epsilon(1e-12));

  std::mt19937_64 rng(21);
  for (int i = 0; i < 25; ++i) {
    const std::uint64_t N = 10 + rng() % 900, y = 1 + rng() % (N - 1), x = N + rng() % 100'000;
    const std::uint64_t H = 1 + rng() % 64;
    const auto f = i % 2 ? S::tau_m(2) : S::mobius();
    const auto d = lemma2_decomposition(f, N, x, y, H);
    CAPTURE(N);
    CAPTURE(x);
    CAPTURE(y);
    CAPTURE(H);
    REQUIRE(std::abs(d.integral_term + d.remainder - d.sigma) < 1e-9);
    const oracle::RealFn fr = i % 2 ? oracle::RealFn([](std::uint64_t n) { return double(oracle::tau_m(2, n)); })
                                    : oracle::RealFn([](std::uint64_t n) { return double(oracle::mobius(n)); });
    REQUIRE(std::abs(d.integral_term - integral_oracle(fr, N, x, y, H)) < 1e-9);
  }
  ComputeOptions many;
  many.threads = 4;
  const auto p = lemma2_decomposition(S::tau_m(3), 9000, 1'000'000, 500, 8);
  const auto q = lemma2_decomposition(S::tau_m(3), 9000, 1'000'000, 500, 8, many);
  CHECK(p.integral_term == q.integral_term);
  CHECK(p.remainder == q.remainder);

  CHECK_THROWS_AS(lemma2_decomposition(S::one(), 5, 100, 5, 8), PreconditionError);
  CHECK_THROWS_AS(lemma2_decomposition(S::one(), 5, 100, 3, 0), PreconditionError);
}

TEST_CASE("sawtooth remainder fit") {
  const SawtoothPoint pts[] = {{50, 10'000, 10, 4 * 5}, {200, 100'000, 20, 40}, {400, 100'000, 40, 40}};
  const auto fit = sawtooth_remainder_fit(S::tau_m(2), pts);
  CHECK(fit.size() == 3);
  CHECK(fit.fitted_constant > 0);
  CHECK(std::isfinite(fit.fitted_constant));
}

TEST_CASE("divisor-proximity sum") {
  CHECK(prop1_lhs(100, 4, 4, 1) == doctest::Approx(3.125).epsilon(1e-15));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t N = 4 + rng() % 3000;
    const std::uint64_t H = 4 + rng() % (N - 3);
    const int m = 1 + i % 3;
    const bool integral = i % 2 == 0;
    const double z = integral ? static_cast<double>(N + rng() % 10'000'000)
                              : static_cast<double>(N) + static_cast<double>(rng() % 10'000'000) + 0.37;
    CAPTURE(N);
    CAPTURE(H);
    CAPTURE(m);
    CAPTURE(z);
    REQUIRE(prop1_lhs(z, N, H, m) == doctest::Approx(prop1_naive(z, N, H, m)).epsilon(1e-10));
  }
  CHECK(prop1_lhs(1e6, 10'000, 16, 2) == doctest::Approx(prop1_naive(1e6L, 10'000, 16, 2)).epsilon(1e-12));
  CHECK_THROWS_AS(prop1_lhs(100, 4, 3, 1), PreconditionError);
  CHECK_THROWS_AS(prop1_lhs(100, 4, 5, 1), PreconditionError);
  CHECK_THROWS_AS(prop1_lhs(3, 4, 4, 1), PreconditionError);
}

TEST_CASE("divisor-proximity half-integral term") {
  // 62.5 / 5 = 12.5 contributes min(1, 2/H) = 0.5; the other terms are 0.6, 1, 1
  CHECK(prop1_lhs(62.5, 4, 4, 1) == doctest::Approx(3.1));
  for (double z : {210.5, 840.5, 2520.5}) CHECK(prop1_lhs(z, 4, 4, 2) == doctest::Approx(prop1_naive(z, 4, 4, 2)));
}

TEST_CASE("divisor-proximity envelope fit") {
  std::vector<Prop1Point> pts;
  for (std::uint64_t H : {4, 8, 16, 32}) pts.push_back({1e6, 256, H, 1});
  pts.push_back({100, 4, 4, 1});
  const auto fit = prop1_envelope_fit(pts);
  CHECK(fit.size() == 5);
  CHECK(fit.lhs.back() == doctest::Approx(3.125));
  CHECK(fit.aux.size() == 2);
  CHECK(fit.aux[0].second.back() == doctest::Approx(std::pow(100.0, 0.1)));
  for (std::size_t i = 0; i < fit.size(); ++i) CHECK(fit.ratio(i) <= fit.fitted_constant);

  const Prop1Point same[] = {{1e6, 512, 16, 1}, {1e6, 512, 16, 2}};
  const auto two = prop1_envelope_fit(same);
  // the extra log N factor of m = 2 is reflected in the envelope
  CHECK(two.envelope[1] / two.envelope[0] > std::log(512.0));
}

TEST_CASE("log-power envelope fit") {
  const std::uint64_t xs[] = {1000, 10'000, 100'000};
  const auto fit = lemma4_envelope_fit(2, xs);
  CHECK(fit.size() == 3);
  CHECK(fit.lhs[0] > 0);
  CHECK(fit.lhs[0] < fit.lhs[1]);
  CHECK(std::isfinite(fit.fitted_constant));
  const std::uint64_t tiny[] = {10};
  CHECK_THROWS_AS(lemma4_envelope_fit(2, tiny), DomainError);
}
