#include "hyplab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/factorization.hpp"

namespace hyplab {

namespace {

using S = FunctionSpec;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

HypothesisData hyp(int s, int m, double kappa, double beta, double delta, double A, double a_s) {
  HypothesisData h;
  h.s = s;
  h.m = m;
  h.kappa = kappa;
  h.beta = beta;
  h.delta = delta;
  h.A = A;
  h.a.assign(static_cast<std::size_t>(s) + 1, std::nullopt);
  h.a.back() = a_s;
  return h;
}

CorollaryEntry make(std::string id, EntryFamily fam, int k, FunctionSpec F, FunctionSpec f, HypothesisData h) {
  h.validate();
  const double c = h.leading().real() / (h.s + 1);
  return {std::move(id), fam, k, std::move(F), std::move(f), std::move(h), c, false};
}

void require_k(const char* name, int k, int lo) {
  if (k < lo) throw InvalidSpecError(std::string(name) + ": k >= " + std::to_string(lo) + " required");
}

constexpr std::uint64_t kConstantPrimeCutoff = 10'000'000;

double three_omega_A_value() {
  static const double v = euler_product(EulerConstant::three_omega_A, kConstantPrimeCutoff).partial;
  return v;
}

}  // namespace

CorollaryEntry cor2_tau_k(int k) {
  require_k("cor2_tau_k", k, 2);
  if (k > 20) throw InvalidSpecError("cor2_tau_k: k <= 20 required");
  auto e = make("cor2_tau_k(" + std::to_string(k) + ")", EntryFamily::tau_k, k, S::tau_m(k), S::tau_m(k - 1),
                hyp(k - 2, k - 1, 1.0 - 2.0 / k, 0, 0, 1, 1.0 / factorial(k - 2)));
  // displayed error carries y^eps for k >= 3 and omits it for k = 2
  e.hypothesis.kappa_plus_eps = k >= 3;
  e.dual_envelope = true;
  return e;
}

CorollaryEntry cor3_tau_sq() {
  const double CF = 1.0 / (std::numbers::pi * std::numbers::pi);
  return make("cor3_tau_sq", EntryFamily::tau_sq, 0, S::pointwise_product(S::tau_m(2), S::tau_m(2)), S::tau_of_power(2),
              hyp(2, 3, 0.5, 4, 0, 1, 3.0 * CF));
}

CorollaryEntry cor3_tau_cube() {
  const double CF = three_omega_A_value() / 6.0;
  return make("cor3_tau_cube", EntryFamily::tau_cube, 0, S::tau_of_power(3), S::three_pow_omega(),
              hyp(2, 3, 0.5, 4, 0, 1, 3.0 * CF));
}

CorollaryEntry cor4_tau_paren_k(int k) {
  require_k("cor4_tau_paren_k", k, 2);
  return make("cor4_tau_paren_k(" + std::to_string(k) + ")", EntryFamily::tau_paren_k, k, S::tau_paren_k(k), S::mu_k(k),
              hyp(0, 1, 1.0 / k, 0, 0, 1, 1.0 / zeta(k)));
}

CorollaryEntry cor5_tau_star_mu_k(int k) {
  require_k("cor5_tau_star_mu_k", k, 2);
  const double kappa = k <= 3 ? 1.0 / k : 131.0 / 416.0;
  auto e = make("cor5_tau_star_mu_k(" + std::to_string(k) + ")", EntryFamily::tau_star_mu_k, k,
                S::convolution(S::tau_m(2), S::mu_k(k)), S::tau_paren_k(k), hyp(1, 2, kappa, 0, 0, 1, 1.0 / zeta(k)));
  e.hypothesis.kappa_plus_eps = k >= 4;
  return e;
}

CorollaryEntry cor6_three_omega() {
  auto h = hyp(1, 2, 0.5, 6, 0, 1, three_omega_A_value());
  h.a[0] = three_omega_B(kConstantPrimeCutoff);
  return make("cor6_three_omega", EntryFamily::three_omega, 0, S::three_pow_omega(),
              S::pointwise_product(S::mu_k(2), S::two_pow_omega()), std::move(h));
}

CorollaryEntry cor7_lambda_g(const FunctionSpec& g, double a, double kappa, double beta) {
  // sum g log = a z (log z - 1) + O(z^kappa (log z)^{beta+1})
  auto h = hyp(1, 1, kappa, beta + 1, 1, 1, a);
  h.a[0] = -a;
  return make("cor7_lambda_g(" + g.canonical() + ")", EntryFamily::lambda_g, 0,
              S::convolution(S::lambda_attached(g), S::convolution(g, S::one())), S::pointwise_product(g, S::log_pow(1)),
              std::move(h));
}

CorollaryEntry cor7_lambda_mu2() { return cor7_lambda_g(S::mu_k(2), 1.0 / zeta(2), 0.5, 0.0); }

CorollaryEntry cor8_log_k(int k) {
  require_k("cor8_log_k", k, 1);
  if (k > 8) throw InvalidSpecError("cor8_log_k: k <= 8 required");
  auto e = make("cor8_log_k(" + std::to_string(k) + ")", EntryFamily::log_k, k,
                S::convolution(S::convolution(S::lambda_k(k), S::tau_m(2)), S::log_pow(k)),
                S::convolution(S::log_pow(k), S::log_pow(k)),
                hyp(2 * k + 1, 2, 1.0 / 3.0, 0, 2 * k, std::pow(4.0, -k), factorial(k) * factorial(k) / factorial(2 * k + 1)));
  e.hypothesis.kappa_plus_eps = true;
  return e;
}

std::vector<CorollaryEntry> default_registry() {
  return {cor2_tau_k(4),          cor3_tau_sq(),      cor3_tau_cube(),   cor4_tau_paren_k(2),
          cor5_tau_star_mu_k(2),  cor6_three_omega(), cor7_lambda_mu2(), cor8_log_k(1)};
}

std::vector<std::string> registry_names() {
  return {"cor2_tau_k",         "cor3_tau_sq",      "cor3_tau_cube", "cor4_tau_paren_k",
          "cor5_tau_star_mu_k", "cor6_three_omega", "cor7_lambda_g", "cor8_log_k"};
}

CorollaryEntry find_entry(const std::string& name, int k) {
  if (name == "cor2_tau_k") return cor2_tau_k(k);
  if (name == "cor3_tau_sq") return cor3_tau_sq();
  if (name == "cor3_tau_cube") return cor3_tau_cube();
  if (name == "cor4_tau_paren_k") return cor4_tau_paren_k(k);
  if (name == "cor5_tau_star_mu_k") return cor5_tau_star_mu_k(k);
  if (name == "cor6_three_omega") return cor6_three_omega();
  if (name == "cor7_lambda_g") return cor7_lambda_mu2();
  if (name == "cor8_log_k") return cor8_log_k(k);
  std::string known;
  for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidSpecError("unknown registry entry '" + name + "'; known: " + known);
}

EulerProduct euler_product(EulerConstant c, std::uint64_t P) {
  if (P < 2) throw PreconditionError("euler_product: P >= 2 violated");
  if (P > (std::uint64_t{1} << 32)) throw ResourceError("euler_product: P above 2^32");
  long double logp = 0;
  for (std::uint32_t p : primes_up_to(P)) {
    const long double q = 1.0L / p;
    logp += std::log1p(-3.0L * q * q + 2.0L * q * q * q);
  }
  double partial = static_cast<double>(std::exp(logp));
  if (c == EulerConstant::tau_cube_CF) partial /= 6.0;
  // |log factor| <= 3/p^2 beyond P, and sum_{n>P} 3/n^2 <= 3/P
  const double tail = partial * std::expm1(3.0 / static_cast<double>(P));
  return {partial, tail};
}

double three_omega_B(std::uint64_t P) {
  if (P < 2) throw PreconditionError("three_omega_B: P >= 2 violated");
  long double s = 0;
  for (std::uint32_t p : primes_up_to(P)) {
    const long double pd = p;
    s += (pd - 1) * std::log(pd) / (pd * pd * (pd + 2));
  }
  const double A = euler_product(EulerConstant::three_omega_A, P).partial;
  return A * (2.0 * std::numbers::egamma - 1.0 + 6.0 * static_cast<double>(s));
}

ExperimentReport run_theorem1_experiment(const CorollaryEntry& entry, std::span<const std::uint64_t> x_grid,
                                         YRule rule, std::span<const std::uint64_t> ys, double epsilon,
                                         const ComputeOptions& opts, const WindowSummer& window_sum) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw PreconditionError("experiment: epsilon in (0, 1/2] violated");
  if (x_grid.empty()) throw PreconditionError("experiment: empty x grid");
  if (rule == YRule::explicit_list && ys.empty()) throw PreconditionError("experiment: explicit y rule needs y values");
  ExperimentReport rep{entry, epsilon, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::uint64_t x : x_grid) {
    const double xd = static_cast<double>(x);
    std::vector<std::uint64_t> yv;
    if (rule == YRule::explicit_list) {
      yv.assign(ys.begin(), ys.end());
    } else {
      const auto r = admissible_y_range(xd);
      yv.push_back(static_cast<std::uint64_t>(std::floor(std::sqrt(r.y_min * r.y_max))));
      if (rule == YRule::endpoints) {
        yv.push_back(static_cast<std::uint64_t>(std::ceil(1.05 * r.y_min)));
        yv.push_back(static_cast<std::uint64_t>(std::floor(0.95 * r.y_max)));
      }
    }
    for (std::uint64_t y : yv) {
      ExperimentRow row;
      row.x = x;
      row.y = y;
      row.violation = y == 0 ? std::string("y >= 1 violated") : admissibility_violation(xd, static_cast<double>(y));
      row.admissible = row.violation.empty();
      if (y == 0) {
        row.exact = Value::exact(0);
        row.main = row.abs_err = row.norm_err = nan;
        row.envelope = {nan, nan, nan, nan, nan, false};
        rep.rows.push_back(std::move(row));
        continue;
      }
      const double yd = static_cast<double>(y);
      row.exact = window_sum ? window_sum(entry.F, x, y) : short_sum_bruteforce(entry.F, x, y, opts);
      row.main = theorem1_main_term(entry.hypothesis, xd, yd);
      row.abs_err = std::abs(row.exact.to_double() - row.main);
      if (row.admissible) {
        row.envelope = theorem1_envelope(entry.hypothesis, xd, yd, epsilon);
        row.norm_err = row.abs_err / row.envelope.t2;
      } else {
        row.envelope = {nan, nan, nan, nan, nan, entry.hypothesis.kappa_plus_eps};
        row.norm_err = nan;
      }
      row.T = yd * std::exp(std::pow(std::log(xd), 0.25));
      row.N = static_cast<std::uint64_t>(std::floor(row.T));
      row.H = 4 * (row.N / y);
      rep.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return rep;
}

}  // namespace hyplab
