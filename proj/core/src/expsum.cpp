#include "hyplab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hyplab/arith.hpp"
#include "hyplab/asymptotics.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/hooley.hpp"
#include "hyplab/hyperbola.hpp"

namespace hyplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// fractional part of h * t for t in [0, 1)
double frac_mul(std::uint64_t h, double t) {
  const double v = static_cast<double>(h) * t;
  return v - std::floor(v);
}

// P_H at the rational point r / n, phases reduced exactly
double truncated_psi_rational(std::uint64_t r, std::uint64_t n, std::uint64_t H) {
  double s = 0.0;
  for (std::uint64_t h = 1; h <= H; ++h) {
    const auto ph = static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * r) % n);
    s += std::sin(kTwoPi * static_cast<double>(ph) / static_cast<double>(n)) / (std::numbers::pi * static_cast<double>(h));
  }
  return -s;
}

// e(h r / n)
std::complex<double> unit_root(std::uint64_t h, std::uint64_t r, std::uint64_t n) {
  const auto ph = static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * r) % n);
  return std::polar(1.0, kTwoPi * static_cast<double>(ph) / static_cast<double>(n));
}

// Runs body(lo, hi, sum) over blocks of n in (N, 2N] and folds the block
// sums in order.
template <class Body>
double blocked_sum(std::uint64_t first, std::uint64_t last, unsigned threads, Body&& body) {
  if (last < first) return 0.0;
  const std::uint64_t count = last - first + 1;
  const std::size_t blocks = static_cast<std::size_t>((count + kSumBlock - 1) / kSumBlock);
  std::vector<double> part(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t lo = first + b * kSumBlock;
    const std::uint64_t hi = std::min(last, lo + kSumBlock - 1);
    part[b] = body(lo, hi);
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void require_sigma_args(const char* op, std::uint64_t N, std::uint64_t x, std::uint64_t y, std::uint64_t H) {
  if (N <= y) throw PreconditionError(std::string(op) + ": y < N violated");
  if (N > x) throw PreconditionError(std::string(op) + ": N <= x violated");
  if (H < 1) throw PreconditionError(std::string(op) + ": H >= 1 violated");
  if (x > kMaxArgument - y || N > kMaxArgument / 2) throw PreconditionError(std::string(op) + ": arguments exceed 2^63 - 1");
}

double min_term(double dist, std::uint64_t H) {
  if (dist == 0.0) return 1.0;
  return std::min(1.0, 1.0 / (static_cast<double>(H) * dist));
}

}  // namespace

EnvelopeFit make_envelope_fit(std::string id, std::vector<std::string> coordinates,
                              std::vector<std::vector<double>> grid, std::vector<double> lhs,
                              std::vector<double> envelope) {
  if (lhs.size() != envelope.size() || lhs.size() != grid.size())
    throw PreconditionError("envelope fit: grid, lhs and envelope sizes differ");
  EnvelopeFit fit{std::move(id), std::move(coordinates), std::move(grid), std::move(lhs), std::move(envelope), 0.0, {}};
  for (std::size_t i = 0; i < fit.size(); ++i) {
    if (!(fit.envelope[i] > 0.0) || !std::isfinite(fit.envelope[i]))
      throw DomainError("envelope fit: envelope must be finite and positive at every grid point");
    fit.fitted_constant = std::max(fit.fitted_constant, fit.ratio(i));
  }
  return fit;
}

double truncated_psi(double t, std::uint64_t H) {
  if (H < 1) throw PreconditionError("truncated_psi: H >= 1 violated");
  const double f = t - std::floor(t);
  double s = 0.0;
  for (std::uint64_t h = 1; h <= H; ++h)
    s += std::sin(kTwoPi * frac_mul(h, f)) / (std::numbers::pi * static_cast<double>(h));
  return -s;
}

std::vector<double> open_unit_grid(std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
  return g;
}

EnvelopeFit psi_truncation_error_profile(std::uint64_t H, std::span<const double> t_grid) {
  if (H < 1) throw PreconditionError("psi profile: H >= 1 violated");
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs, env;
  for (double t : t_grid) {
    const double d = dist_to_nearest_int(t);
    if (!(d >= 1e-6)) throw PreconditionError("psi profile: grid point within 1e-6 of an integer");
    grid.push_back({t, static_cast<double>(H)});
    lhs.push_back(std::abs(psi(t) - truncated_psi(t, H)));
    env.push_back(min_term(d, H));
  }
  return make_envelope_fit("psi_truncation", {"t", "H"}, std::move(grid), std::move(lhs), std::move(env));
}

SawtoothSplit lemma2_decomposition(const FunctionSpec& f, std::uint64_t N, std::uint64_t x, std::uint64_t y,
                                 std::uint64_t H, const ComputeOptions& opts) {
  require_sigma_args("lemma2_decomposition", N, x, y, H);
  SawtoothSplit out;
  if (y == 0) return out;
  const ValueTable t = sieve_range(f, N + 1, 2 * N, opts);
  out.integral_term = blocked_sum(N + 1, 2 * N, opts.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double fn = t.value_of(n).to_double();
      if (fn == 0.0) continue;
      const std::uint64_t ra = x % n, rb = (x + y) % n;
      const double nd = static_cast<double>(n);
      std::complex<double> acc = 0.0;
      for (std::uint64_t h = 1; h <= H; ++h) {
        // -(f(n)/n) * int_x^{x+y} e(+-h t/n) dt, both signs of h
        const double hd = static_cast<double>(h);
        const std::complex<double> plus = (unit_root(h, rb, n) - unit_root(h, ra, n)) * (nd / std::complex<double>(0.0, kTwoPi * hd));
        const std::complex<double> minus = (std::conj(unit_root(h, rb, n)) - std::conj(unit_root(h, ra, n))) *
                                           (nd / std::complex<double>(0.0, -kTwoPi * hd));
        acc += plus + minus;
      }
      s += -(fn / nd) * acc.real();
    }
    return s;
  });
  out.remainder = blocked_sum(N + 1, 2 * N, opts.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double fn = t.value_of(n).to_double();
      if (fn == 0.0) continue;
      const std::uint64_t ra = x % n, rb = (x + y) % n;
      const double nd = static_cast<double>(n);
      const double psi_b = static_cast<double>(rb) / nd - 0.5, psi_a = static_cast<double>(ra) / nd - 0.5;
      s += fn * ((psi_b - truncated_psi_rational(rb, n, H)) - (psi_a - truncated_psi_rational(ra, n, H)));
    }
    return s;
  });
  out.sigma = sigma_F(f, N, x, y, opts);
  return out;
}

EnvelopeFit sawtooth_remainder_fit(const FunctionSpec& f, std::span<const SawtoothPoint> points,
                                 const ComputeOptions& opts) {
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs, env;
  for (const auto& p : points) {
    const auto terms = lemma2_decomposition(f, p.N, p.x, p.y, p.H, opts);
    const ValueTable t = sieve_range(f, p.N + 1, 2 * p.N, opts);
    double best = 0.0;
    for (std::uint64_t z = p.x; z <= p.x + p.y; ++z) {
      const double s = blocked_sum(p.N + 1, 2 * p.N, opts.threads, [&](std::uint64_t lo, std::uint64_t hi) {
        double acc = 0.0;
        for (std::uint64_t n = lo; n <= hi; ++n) {
          const std::uint64_t r = z % n;
          const double d = static_cast<double>(std::min(r, n - r)) / static_cast<double>(n);
          acc += std::abs(t.value_of(n).to_double()) * min_term(d, p.H);
        }
        return acc;
      });
      best = std::max(best, s);
    }
    grid.push_back({static_cast<double>(p.N), static_cast<double>(p.x), static_cast<double>(p.y), static_cast<double>(p.H)});
    lhs.push_back(std::abs(terms.remainder));
    env.push_back(best);
  }
  return make_envelope_fit("lemma2_remainder", {"N", "x", "y", "H"}, std::move(grid), std::move(lhs), std::move(env));
}

double prop1_lhs(double z, std::uint64_t N, std::uint64_t H, int m, const ComputeOptions& opts) {
  if (!(H >= 4)) throw PreconditionError("prop1_lhs: H >= 4 violated");
  if (H > N) throw PreconditionError("prop1_lhs: H <= N violated");
  if (!(static_cast<double>(N) <= z)) throw PreconditionError("prop1_lhs: N <= z violated");
  if (N > kMaxArgument / 2) throw PreconditionError("prop1_lhs: N exceeds 2^62");
  if (m < 1) throw PreconditionError("prop1_lhs: m >= 1 violated");
  const ValueTable t = sieve_range(FunctionSpec::tau_m(m), N + 1, 2 * N, opts);
  const bool integral = z == std::floor(z) && z < 9.2e18;
  const auto zi = integral ? static_cast<std::uint64_t>(z) : 0;
  return blocked_sum(N + 1, 2 * N, opts.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      double d;
      if (integral) {
        const std::uint64_t r = zi % n;
        d = static_cast<double>(std::min(r, n - r)) / static_cast<double>(n);
      } else {
        d = dist_to_nearest_int(z / static_cast<double>(n));
      }
      s += t.value_of(n).to_double() * min_term(d, H);
    }
    return s;
  });
}

EnvelopeFit prop1_envelope_fit(std::span<const Prop1Point> points, const ComputeOptions& opts) {
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs, env, z01, z04;
  for (const auto& p : points) {
    const double v = prop1_lhs(p.z, p.N, p.H, p.m, opts);
    const double N = static_cast<double>(p.N), H = static_cast<double>(p.H), lz = std::log(p.z);
    const double e = N / H * std::log(H) * std::pow(std::log(N), p.m - 1) * std::pow(lz, eps_r(p.z, p.m + 1));
    grid.push_back({p.z, N, H, static_cast<double>(p.m)});
    lhs.push_back(v);
    env.push_back(e);
    z01.push_back(std::pow(p.z, 0.1));
    z04.push_back(std::pow(p.z, 0.4));
  }
  auto fit = make_envelope_fit("prop1", {"z", "N", "H", "m"}, std::move(grid), std::move(lhs), std::move(env));
  fit.aux = {{"z^0.1", std::move(z01)}, {"z^0.4", std::move(z04)}};
  return fit;
}

EnvelopeFit lemma4_envelope_fit(int r, std::span<const std::uint64_t> x_grid, const ComputeOptions& opts) {
  std::vector<std::vector<double>> grid;
  std::vector<double> lhs, env;
  for (std::uint64_t x : x_grid) {
    const double xd = static_cast<double>(x);
    const double e = std::pow(std::log(xd), 1.0 + eps_r(xd, r));
    grid.push_back({xd, static_cast<double>(r)});
    lhs.push_back(delta_weighted_prefix(r, x, opts));
    env.push_back(e);
  }
  return make_envelope_fit("lemma4", {"x", "r"}, std::move(grid), std::move(lhs), std::move(env));
}

}  // namespace hyplab
