#include "hyplab/hyperbola.hpp"

#include <cmath>
#include <limits>

#include "hyplab/arith.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/evaluator.hpp"
#include "hyplab/sieve.hpp"

namespace hyplab {

Threshold Threshold::integer(std::uint64_t t) {
  if (t < 1 || t > kMaxArgument) throw PreconditionError("Threshold: need 1 <= T <= 2^63 - 1");
  return Threshold(static_cast<int128>(t), 1);
}

Threshold Threshold::real(double t) {
  if (!std::isfinite(t) || t < 1 || t >= 9.2233720368547758e18)
    throw PreconditionError("Threshold: need 1 <= T < 2^63, got " + format_double(t));
  int exp = 0;
  const double m = std::frexp(t, &exp);  // t = m 2^exp, 0.5 <= m < 1
  auto mant = static_cast<int128>(std::ldexp(m, 53));
  exp -= 53;
  if (exp >= 0) return Threshold(mant << exp, 1);
  int128 den = int128{1} << -exp;
  while ((mant & 1) == 0 && den > 1) {
    mant >>= 1;
    den >>= 1;
  }
  return Threshold(mant, den);
}

double Threshold::to_double() const noexcept {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Threshold::to_string() const {
  return is_integer() ? hyplab::to_string(num_) : hyplab::to_string(num_) + "/" + hyplab::to_string(den_);
}

double psi(double t) { return t - std::floor(t) - 0.5; }

double dist_to_nearest_int(double t) {
  const double fl = std::floor(t);
  return std::min(t - fl, fl + 1 - t);
}

namespace {

// Running sum of either integer or real values.
struct Acc {
  int128 i = 0;
  long double r = 0;
};

// Sums one function over windows (a, b]. Windows inside the dense range use
// a prefix table; longer windows are sieved; short ones are factored one
// integer at a time.
class RangeSummer {
 public:
  RangeSummer(const FunctionSpec& h, const WindowFactorizer& wf, const HyperbolaOptions& opts)
      : ev_(h), wf_(wf), exact_(h.exact()), one_(h.kind() == FunctionKind::one),
        sieve_min_(opts.sieve_window_min) {}

  bool exact() const { return exact_; }

  // Prefix table on [lo, hi]; windows with lo - 1 <= a < b <= hi use it.
  void set_dense(std::uint64_t lo, std::uint64_t hi, const ComputeOptions& copts) {
    if (one_ || hi < lo) return;
    const ValueTable t = sieve_range(ev_.spec(), lo, hi, copts);
    dense_lo_ = lo;
    dense_hi_ = hi;
    if (exact_) {
      pre_i_.assign(t.size() + 1, 0);
      const auto v = t.integers();
      for (std::size_t j = 0; j < v.size(); ++j) pre_i_[j + 1] = checked::add(pre_i_[j], int128{v[j]});
    } else {
      pre_r_.assign(t.size() + 1, 0);
      const auto v = t.reals();
      for (std::size_t j = 0; j < v.size(); ++j) pre_r_[j + 1] = pre_r_[j] + v[j];
    }
  }

  Acc sum(std::uint64_t a, std::uint64_t b) const {
    Acc s;
    if (b <= a) return s;
    if (one_) {
      s.i = static_cast<int128>(b - a);
      return s;
    }
    if (dense_hi_ != 0 && a + 1 >= dense_lo_ && b <= dense_hi_) {
      const std::size_t lo = a + 1 - dense_lo_, hi = b + 1 - dense_lo_;
      if (exact_)
        s.i = pre_i_[hi] - pre_i_[lo];
      else
        s.r = pre_r_[hi] - pre_r_[lo];
      return s;
    }
    if (b - a >= sieve_min_) {
      for (std::uint64_t lo = a + 1; lo <= b;) {
        const std::uint64_t hi = std::min<std::uint64_t>(b, lo + WindowFactorizer::block_size - 1);
        wf_.for_each_in_block(lo, hi, [&](std::size_t, const Factorization& f) { add(s, f); });
        lo = hi + 1;
      }
      return s;
    }
    for (std::uint64_t n = a + 1; n <= b; ++n) add(s, wf_.factor(n));
    return s;
  }

 private:
  void add(Acc& s, const Factorization& f) const {
    if (exact_)
      s.i = checked::add(s.i, int128{ev_.integer_at(f)});
    else
      s.r += ev_.real_at(f);
  }

  Evaluator ev_;
  const WindowFactorizer& wf_;
  bool exact_;
  bool one_;
  std::uint64_t sieve_min_;
  std::uint64_t dense_lo_ = 0, dense_hi_ = 0;
  std::vector<int128> pre_i_;
  std::vector<long double> pre_r_;
};

// Outer coefficient table c(1..count), as integers or reals.
struct Coefficients {
  std::vector<std::int64_t> i;
  std::vector<double> r;
  bool exact = true;

  Coefficients(const FunctionSpec& c, std::uint64_t count, const ComputeOptions& opts) : exact(c.exact()) {
    if (count == 0) return;
    const ValueTable t = sieve_range(c, 1, count, opts);
    if (exact)
      i.assign(t.integers().begin(), t.integers().end());
    else
      r.assign(t.reals().begin(), t.reals().end());
  }
  bool zero(std::uint64_t d) const { return exact ? i[d - 1] == 0 : r[d - 1] == 0.0; }
};

// coefficient * inner, accumulated into s
void mul_add(Acc& s, const Coefficients& c, std::uint64_t d, const Acc& inner, bool inner_exact) {
  if (c.exact && inner_exact) {
    s.i = checked::add(s.i, checked::mul(int128{c.i[d - 1]}, inner.i));
    return;
  }
  const long double cv = c.exact ? static_cast<long double>(c.i[d - 1]) : c.r[d - 1];
  const long double iv = inner_exact ? static_cast<long double>(inner.i) : inner.r;
  s.r += cv * iv;
}

Value to_value(const Acc& s, bool exact) {
  return exact ? Value::exact(s.i) : Value::real(static_cast<double>(s.r));
}

// sum_{d=1}^{count} c(d) * summer.sum(floor(x/d), floor((x+y)/d)); chunks of
// fixed size are reduced in order so the result is thread-count independent.
Acc outer_sum(const Coefficients& c, const RangeSummer& summer, std::uint64_t count, std::uint64_t x,
              std::uint64_t y, unsigned threads) {
  constexpr std::uint64_t chunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((count + chunk - 1) / chunk);
  std::vector<Acc> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t ci) {
    const std::uint64_t lo = ci * chunk + 1, hi = std::min<std::uint64_t>(count, lo + chunk - 1);
    Acc s;
    for (std::uint64_t d = lo; d <= hi; ++d) {
      if (c.zero(d)) continue;
      mul_add(s, c, d, summer.sum(x / d, (x + y) / d), summer.exact());
    }
    parts[ci] = s;
  });
  Acc total;
  for (const Acc& p : parts) {
    total.i = checked::add(total.i, p.i);
    total.r += p.r;
  }
  return total;
}

void check_cap(std::uint64_t n, const ComputeOptions& opts, const char* what) {
  if (n > opts.segment_cap)
    throw ResourceError(std::string("short_hyperbola: ") + what + " of " + std::to_string(n) +
                        " exceeds the segment cap of " + std::to_string(opts.segment_cap));
}

}  // namespace

HyperbolaDecomposition short_hyperbola(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t x,
                                       std::uint64_t y, const Threshold& T,
                                       const HyperbolaOptions& opts) {
  if (y < 1) throw PreconditionError("short_hyperbola: y >= 1 violated");
  if (x > kMaxArgument - y) throw PreconditionError("short_hyperbola: x + y exceeds 2^63 - 1");
  if (T < y) throw PreconditionError("short_hyperbola: T >= y violated");
  if (!T.times_at_least(y, x)) throw PreconditionError("short_hyperbola: T >= x/y violated");
  if (T > x) throw PreconditionError("short_hyperbola: T <= x violated");

  const std::uint64_t D = T.floor();
  const std::uint64_t K = T.floor_div(x);
  const std::uint64_t q = T.floor_div(x + y);
  check_cap(D, opts.compute, "floor(T)");
  check_cap(K, opts.compute, "floor(x/T)");

  const WindowFactorizer wf(x + y);
  const bool exact = f.exact() && g.exact();
  HyperbolaDecomposition out;
  out.T = T;
  out.x = x;
  out.y = y;
  out.outer_terms = D + K + (q > K ? 1 : 0);

  // d-sum. Windows (x/d, (x+y)/d] overlap once d >= x/y; those all sit in
  // (x/D, (x+y)/d0] and share one dense table.
  {
    const Coefficients cf(f, D, opts.compute);
    RangeSummer gs(g, wf, opts);
    std::uint64_t d0 = std::max<std::uint64_t>(1, (x + y - 1) / y);
    const std::uint64_t dense_lo = x / D + 1;
    if (d0 <= D) {
      const std::uint64_t want = (x + y) / d0;
      if (want - dense_lo + 1 > opts.prefix_limit)
        d0 = std::max<std::uint64_t>(d0, (x + y) / (dense_lo - 1 + opts.prefix_limit) + 1);
      if (d0 <= D) gs.set_dense(dense_lo, (x + y) / d0, opts.compute);
    }
    out.term_d = to_value(outer_sum(cf, gs, D, x, y, opts.compute.threads), exact);
  }

  // k-sum and the boundary integer q
  const Coefficients cg(g, std::max(K, q > K ? q : 0), opts.compute);
  RangeSummer fs(f, wf, opts);
  out.term_k = to_value(outer_sum(cg, fs, K, x, y, opts.compute.threads), exact);
  Acc s2;
  if (q > K && !cg.zero(q)) mul_add(s2, cg, q, fs.sum(D, (x + y) / q), fs.exact());
  out.boundary_S2 = to_value(s2, exact);

  out.total = out.term_d + out.term_k + out.boundary_S2;
  return out;
}

Value long_hyperbola(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t x, const Threshold& T,
                     const ComputeOptions& opts) {
  if (x < 1) throw PreconditionError("long_hyperbola: x >= 1 violated");
  if (T > x) throw PreconditionError("long_hyperbola: T <= x violated");
  const ValueTable ft = sieve_range(f, 1, x, opts);
  const ValueTable gt = sieve_range(g, 1, x, opts);
  const bool exact = f.exact() && g.exact();
  const std::uint64_t D = T.floor(), K = T.floor_div(x);

  auto prefix = [](const ValueTable& t) {
    std::vector<long double> r(t.size() + 1, 0);
    std::vector<int128> i(t.exact() ? t.size() + 1 : 0, 0);
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t.exact())
        i[j + 1] = checked::add(i[j], int128{t.integers()[j]});
      else
        r[j + 1] = r[j] + t.reals()[j];
    }
    return std::pair(std::move(i), std::move(r));
  };
  const auto [Fi, Fr] = prefix(ft);
  const auto [Gi, Gr] = prefix(gt);

  if (exact) {
    int128 s = 0;
    for (std::uint64_t d = 1; d <= D; ++d)
      s = checked::add(s, checked::mul(int128{ft.integers()[d - 1]}, Gi[x / d]));
    for (std::uint64_t k = 1; k <= K; ++k)
      s = checked::add(s, checked::mul(int128{gt.integers()[k - 1]}, Fi[x / k]));
    return Value::exact(checked::add(s, -checked::mul(Fi[D], Gi[K])));
  }
  auto fval = [&](std::uint64_t n) { return static_cast<long double>(ft.at(n - 1).to_double()); };
  auto gval = [&](std::uint64_t n) { return static_cast<long double>(gt.at(n - 1).to_double()); };
  auto Fp = [&](std::uint64_t n) { return ft.exact() ? static_cast<long double>(Fi[n]) : Fr[n]; };
  auto Gp = [&](std::uint64_t n) { return gt.exact() ? static_cast<long double>(Gi[n]) : Gr[n]; };
  long double s = 0;
  for (std::uint64_t d = 1; d <= D; ++d) s += fval(d) * Gp(x / d);
  for (std::uint64_t k = 1; k <= K; ++k) s += gval(k) * Fp(x / k);
  return Value::real(static_cast<double>(s - Fp(D) * Gp(K)));
}

double sigma_F(const FunctionSpec& f, std::uint64_t N, std::uint64_t x, std::uint64_t y,
               const ComputeOptions& opts) {
  if (N <= y) throw PreconditionError("sigma_F: y < N violated");
  if (N > x) throw PreconditionError("sigma_F: N <= x violated");
  if (x > kMaxArgument - y || N > kMaxArgument / 2) throw PreconditionError("sigma_F: arguments exceed 2^63 - 1");
  if (y == 0) return 0.0;
  const ValueTable t = sieve_range(f, N + 1, 2 * N, opts);
  OrderedSum s;
  for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
    // psi((x+y)/n) - psi(x/n) = ({(x+y)/n} - {x/n}), exact remainders
    const auto a = static_cast<std::int64_t>((x + y) % n), b = static_cast<std::int64_t>(x % n);
    const double diff = static_cast<double>(a - b) / static_cast<double>(n);
    s.add(t.value_of(n).to_double() * diff);
  }
  return s.total();
}

}  // namespace hyplab
