// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures. argv[1] is the hyplab executable used by the determinism check.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hyplab/arith.hpp"
#include "hyplab/asymptotics.hpp"
#include "hyplab/experiment.hpp"
#include "hyplab/expsum.hpp"
#include "hyplab/hooley.hpp"
#include "hyplab/hyperbola.hpp"

using namespace hyplab;
using S = FunctionSpec;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail, double seconds) {
  std::printf("%s [%d] %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void run(int id, const std::string& title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, title, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(double v) { return format_double(v); }

// 1: short_hyperbola against the sieve for each registry pair (f, 1)
bool hyperbola_exactness(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checked = 0, mismatches = 0;
  for (const auto& e : default_registry()) {
    for (int i = 0; i < 200; ++i) {
      const auto x = static_cast<std::uint64_t>(std::exp(std::log(16.0) + u(rng) * (std::log(1e6) - std::log(16.0))));
      const auto y = std::max<std::uint64_t>(
          1, static_cast<std::uint64_t>(std::exp(u(rng) * std::log(static_cast<double>(std::min<std::uint64_t>(x, 20'000))))));
      const double lo = std::max(static_cast<double>(y), static_cast<double>(x) / static_cast<double>(y));
      if (lo > static_cast<double>(x)) {
        --i;
        continue;
      }
      double t = std::exp(std::log(lo) + u(rng) * (std::log(static_cast<double>(x)) - std::log(lo)));
      if (i % 2 == 0) t = std::floor(t);
      t = std::clamp(t, lo, static_cast<double>(x));
      auto T = Threshold::real(t);
      if (T < y || !T.times_at_least(y, x)) T = Threshold::integer(std::min<std::uint64_t>(x, std::max(y, (x + y - 1) / y)));
      const auto h = short_hyperbola(e.f, S::one(), x, y, T);
      const auto want = short_sum_bruteforce(e.F, x, y);
      const bool ok = want.is_exact() ? h.total == want : values_agree(h.total, want, 1e-9);
      ++checked;
      if (!ok) {
        ++mismatches;
        if (mismatches == 1)
          detail = e.id + " x=" + std::to_string(x) + " y=" + std::to_string(y) + " T=" + T.to_string() + " got " +
                   h.total.to_string() + " want " + want.to_string() + "; ";
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail += std::to_string(checked) + " triples, " + std::to_string(mismatches) + " mismatches, limit 60 s";
  return mismatches == 0 && secs <= 60.0;
}

// 2: the dyadic divisor inequality
bool dyadic_inequality(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0, violations = 0;
  for (std::uint64_t n = 1; n <= 20'000; ++n) {
    const int rmax = n <= 2000 ? 3 : 2;
    std::uint64_t top = 1;
    while (top < n) top <<= 1;
    for (int r = 1; r <= rmax; ++r)
      for (std::uint64_t N = 1; N <= top; N <<= 1) {
        ++checks;
        if (!lemma5_check(n, r, N).holds) ++violations;
      }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail = std::to_string(checks) + " checks, " + std::to_string(violations) + " violations, limit 300 s";
  return violations == 0 && secs <= 300.0;
}

// 3: exact Delta against the grid oracle
bool delta_oracle(std::string& detail) {
  std::size_t mismatches = 0;
  for (std::uint64_t n = 1; n <= 2000; ++n)
    for (int r = 2; r <= 3; ++r)
      if (delta_r(n, r).value != delta_r_grid_oracle(n, r, 1e-4)) {
        if (mismatches == 0) detail = "first mismatch n=" + std::to_string(n) + " r=" + std::to_string(r) + "; ";
        ++mismatches;
      }
  detail += "4000 evaluations, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

// 4: Mobius and inverse identities, transform round trips
bool inverse_identities(std::string& detail) {
  constexpr std::uint64_t N = 1000;
  const auto unit_ok = [](const ValueTable& t) {
    for (std::uint64_t n = 1; n <= t.hi(); ++n)
      if (!values_agree(t.value_of(n), Value::exact(n == 1 ? 1 : 0), 1e-9)) return false;
    return true;
  };
  const auto one = sieve_range(S::one(), 1, N);
  bool ok = unit_ok(convolve_prefix_tables(sieve_range(S::mobius(), 1, N), one, S::convolution(S::mobius(), S::one())));
  std::size_t inverses = 0, skipped = 0, round_trips = 0;
  for (const auto& e : default_registry()) {
    for (const auto& g : {e.F, e.f}) {
      if (evaluate_point(g, 1).to_double() == 0.0) {
        ++skipped;  // g(1) = 0 has no inverse
        continue;
      }
      const auto gt = sieve_range(g, 1, N);
      const auto inv = dirichlet_inverse_prefix(g, N);
      ok = ok && unit_ok(convolve_prefix_tables(gt, inv, S::convolution(g, S::dirichlet_inverse(g))));
      ++inverses;
    }
    const auto tr = eratosthenes_transform(e.F, N);
    const auto ft = sieve_range(e.f, 1, N);
    const auto back = convolve_prefix_tables(tr, one, S::convolution(e.f, S::one()));
    const auto Ft = sieve_range(e.F, 1, N);
    for (std::uint64_t n = 1; n <= N; ++n) {
      const bool exact_path = tr.exact() && ft.exact();
      ok = ok && (exact_path ? tr.value_of(n) == ft.value_of(n) : values_agree(tr.value_of(n), ft.value_of(n), 1e-9));
      ok = ok && (back.exact() && Ft.exact() ? back.value_of(n) == Ft.value_of(n)
                                             : values_agree(back.value_of(n), Ft.value_of(n), 1e-9));
    }
    ++round_trips;
  }
  detail = std::to_string(inverses) + " inverses (" + std::to_string(skipped) + " with g(1)=0 skipped), " +
           std::to_string(round_trips) + " transform round trips on [1, 1000]";
  return ok;
}

// 5: truncated sawtooth envelope
bool psi_envelope(std::string& detail) {
  const auto grid = open_unit_grid(10'000);
  double C = 0;
  for (std::uint64_t H : {4, 16, 64}) {
    const auto fit = psi_truncation_error_profile(H, grid);
    detail += "H=" + std::to_string(H) + ":" + fmt(fit.fitted_constant) + " ";
    C = std::max(C, fit.fitted_constant);
  }
  detail += "C=" + fmt(C) + " limit 3";
  return C <= 3.0;
}

// 6: closed-form integral plus remainder against sigma_F
bool split_reconciliation(std::string& detail) {
  std::mt19937_64 rng(77);
  double worst = 0;
  const std::array<S, 3> fs = {S::one(), S::tau_m(2), S::mobius()};
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t N = 2 + rng() % 999, y = 1 + rng() % (N - 1), x = N + rng() % 10'000'000;
    const std::uint64_t H = 1 + rng() % 64;
    const auto d = lemma2_decomposition(fs[i % 3], N, x, y, H);
    worst = std::max(worst, std::abs(d.integral_term + d.remainder - d.sigma));
  }
  detail = "50 points, worst |integral + remainder - sigma| = " + fmt(worst) + " limit 1e-6";
  return worst <= 1e-6;
}

// 7, 8: exact / main trend at the geometric-mean y
bool trend(const CorollaryEntry& e, std::string& detail) {
  const std::uint64_t xs[] = {1'000'000, 10'000'000, 100'000'000};
  const auto rep = run_theorem1_experiment(e, xs, YRule::geomean);
  std::array<double, 3> q{};
  for (int i = 0; i < 3; ++i) {
    q[i] = rep.rows[i].exact.to_double() / rep.rows[i].main;
    detail += fmt(q[i]) + (i < 2 ? ", " : "");
  }
  bool finite = true;
  for (double v : q) finite = finite && std::isfinite(v) && v > 0;
  const bool decreasing_to_one = q[0] > q[1] && q[1] > q[2] && q[2] > 1.0;
  const bool band = q[2] >= 0.8 && q[2] <= 2.0;
  detail = e.id + " exact/main = " + detail + (decreasing_to_one ? "; strictly decreasing toward 1" : "") +
           (band ? "; x=1e8 within [0.8, 2.0]" : "");
  return finite && (decreasing_to_one || band);
}

// 9: residual ratios do not grow along doubling scans
bool no_growth(const std::string& name, const std::vector<double>& r, std::string& detail) {
  const double first = std::max({r[0], r[1], r[2]}), last = std::max({r[3], r[4], r[5]});
  detail += name + " " + fmt(first) + "->" + fmt(last) + "; ";
  return std::isfinite(first) && last <= 1.1 * first;
}

bool residual_scans(std::string& detail) {
  const auto e = cor2_tau_k(4);
  std::vector<double> a, b, c;
  for (int i = 0; i < 6; ++i) a.push_back(eq5_S1(e.f, e.hypothesis, std::ldexp(1.0, 14 + i)).ratio());
  for (int i = 0; i < 6; ++i) {
    const std::uint64_t x = 1'000'000ull << i;
    const auto r = admissible_y_range(static_cast<double>(x));
    const auto y = static_cast<std::uint64_t>(std::sqrt(r.y_min * r.y_max));
    const double T = static_cast<double>(y) * std::exp(std::pow(std::log(static_cast<double>(x)), 0.25));
    b.push_back(eq6_S3(e.f, e.hypothesis, x, y, Threshold::real(std::floor(T))).ratio());
  }
  for (int i = 0; i < 6; ++i) {
    const double x = 1e6 * std::ldexp(1.0, i);
    c.push_back(log_power_sum_check(x, std::sqrt(x), 2).ratio());
  }
  bool ok = no_growth("S1(T doubling)", a, detail);
  ok = no_growth("S3(x doubling)", b, detail) && ok;
  ok = no_growth("log-power j=2 (x doubling)", c, detail) && ok;
  detail += "max of last three <= 1.1 x max of first three";
  return ok;
}

// 10
bool eps_spot(std::string& detail) {
  const double x = std::exp(std::exp(std::numbers::e));
  const double want = 31 * std::sqrt(2 / std::numbers::e), got = eps_r(x, 2);
  const double rel = std::abs(got / want - 1);
  detail = "eps_2 = " + fmt(got) + ", relative error " + fmt(rel) + " limit 1e-9";
  return rel <= 1e-9;
}

// 11
std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + cmd);
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  if (pclose(p) != 0) throw std::runtime_error("command failed: " + cmd);
  return out;
}

bool determinism(const std::string& exe, std::string& detail) {
  if (exe.empty()) {
    detail = "hyplab executable not given";
    return false;
  }
  const std::string base = exe + " verify --entry cor2_tau_k --k 4 --xgrid 1e6,1e7,1e8 --y-rule endpoints --format csv";
  const auto a = capture(base + " --threads 1");
  const auto b = capture(base + " --threads 1");
  const auto c = capture(base + " --threads 8");
  const std::string rb = exe + " verify --entry cor8_log_k --k 1 --xgrid 1e6,1e7 --format csv";
  const auto d = capture(rb + " --threads 1");
  const auto e = capture(rb + " --threads 8");
  const bool ok = a == b && a == c && d == e && !a.empty();
  detail = std::to_string(a.size()) + "+" + std::to_string(d.size()) + " bytes, runs " + (a == b ? "identical" : "differ") +
           ", threads 1 vs 8 " + (a == c && d == e ? "identical" : "differ");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  run(1, "hyperbola exactness", hyperbola_exactness);
  run(2, "dyadic divisor inequality", dyadic_inequality);
  run(3, "Delta grid-oracle equivalence", delta_oracle);
  run(4, "Mobius and inverse identities", inverse_identities);
  run(5, "truncated psi envelope", psi_envelope);
  run(6, "integral plus remainder reconciliation", split_reconciliation);
  run(7, "tau_4 short-sum trend", [](std::string& d) { return trend(cor2_tau_k(4), d); });
  run(8, "tau_(2) short-sum trend", [](std::string& d) { return trend(cor4_tau_paren_k(2), d); });
  run(9, "residual ratios along doubling scans", residual_scans);
  run(10, "eps_r spot value", eps_spot);
  run(11, "verify determinism", [&](std::string& d) { return determinism(exe, d); });
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
