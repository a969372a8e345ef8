#include "hyplab/arith.hpp"

#include <cmath>

#include "hyplab/checked.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/evaluator.hpp"
#include "hyplab/sieve.hpp"

namespace hyplab {

ValueTable::ValueTable(FunctionSpec spec, std::uint64_t lo, std::vector<std::int64_t> values)
    : spec_(std::move(spec)), lo_(lo), values_(std::move(values)) {}

ValueTable::ValueTable(FunctionSpec spec, std::uint64_t lo, std::vector<double> values)
    : spec_(std::move(spec)), lo_(lo), values_(std::move(values)) {}

std::size_t ValueTable::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

Value ValueTable::at(std::size_t i) const {
  if (const auto* v = std::get_if<std::vector<std::int64_t>>(&values_)) return Value::exact(v->at(i));
  return Value::real(std::get<std::vector<double>>(values_).at(i));
}

std::span<const std::int64_t> ValueTable::integers() const {
  return std::get<std::vector<std::int64_t>>(values_);
}

std::span<const double> ValueTable::reals() const {
  return std::get<std::vector<double>>(values_);
}

Value ValueTable::sum() const {
  if (exact()) {
    int128 s = 0;
    for (std::int64_t v : integers()) s = checked::add(s, static_cast<int128>(v));
    return Value::exact(s);
  }
  OrderedSum s;
  for (double v : reals()) s.add(v);
  return Value::real(s.total());
}

bool operator==(const ValueTable& a, const ValueTable& b) {
  return a.spec_ == b.spec_ && a.lo_ == b.lo_ && a.values_ == b.values_;
}

// ---------------------------------------------------------------------------

namespace {

void check_argument(std::uint64_t n, const char* op) {
  if (n < 1 || n > kMaxArgument)
    throw PreconditionError(std::string(op) + ": argument must lie in [1, 2^63 - 1], got " +
                            std::to_string(n));
}

void check_cap(std::uint64_t entries, const ComputeOptions& opts, const char* op) {
  if (entries > opts.segment_cap)
    throw ResourceError(std::string(op) + ": " + std::to_string(entries) +
                        " entries exceed the segment cap of " +
                        std::to_string(opts.segment_cap));
}

template <class T>
void fill_window(const Evaluator& ev, const WindowFactorizer& wf, std::uint64_t lo,
                 std::uint64_t hi, std::vector<T>& out, unsigned threads) {
  const std::uint64_t len = hi - lo + 1;
  out.resize(len);
  const std::size_t blocks = (len + WindowFactorizer::block_size - 1) / WindowFactorizer::block_size;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t blo = lo + b * WindowFactorizer::block_size;
    const std::uint64_t bhi = std::min<std::uint64_t>(hi, blo + WindowFactorizer::block_size - 1);
    T* dst = out.data() + (blo - lo);
    wf.for_each_in_block(blo, bhi, [&](std::size_t i, const Factorization& f) {
      if constexpr (std::is_same_v<T, std::int64_t>)
        dst[i] = ev.integer_at(f);
      else
        dst[i] = ev.real_at(f);
    });
  });
}

ValueTable sieve_with(const Evaluator& ev, const WindowFactorizer& wf, std::uint64_t lo,
                      std::uint64_t hi, unsigned threads) {
  if (ev.exact()) {
    std::vector<std::int64_t> v;
    fill_window(ev, wf, lo, hi, v, threads);
    return ValueTable(ev.spec(), lo, std::move(v));
  }
  std::vector<double> v;
  fill_window(ev, wf, lo, hi, v, threads);
  return ValueTable(ev.spec(), lo, std::move(v));
}

}  // namespace

Value evaluate_point(const FunctionSpec& spec, std::uint64_t n) {
  check_argument(n, "evaluate_point");
  return Evaluator(spec).at(factorize(n));
}

ValueTable sieve_range(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi,
                       const ComputeOptions& opts) {
  if (lo < 1 || hi < lo) throw PreconditionError("sieve_range: need 1 <= lo <= hi");
  check_argument(hi, "sieve_range");
  check_cap(hi - lo + 1, opts, "sieve_range");
  const Evaluator ev(spec);
  const WindowFactorizer wf(hi);
  return sieve_with(ev, wf, lo, hi, opts.threads);
}

Value dirichlet_convolve_point(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t n) {
  return evaluate_point(FunctionSpec::convolution(f, g), n);
}

ValueTable convolve_prefix_tables(const ValueTable& a, const ValueTable& b,
                                  const FunctionSpec& result_spec) {
  if (a.lo() != 1 || b.lo() != 1 || a.size() != b.size())
    throw PreconditionError("convolve_prefix_tables: tables must both cover [1, N]");
  const std::size_t N = a.size();
  if (a.exact() && b.exact()) {
    const auto av = a.integers();
    const auto bv = b.integers();
    std::vector<std::int64_t> c(N, 0);
    for (std::size_t d = 1; d <= N; ++d) {
      if (av[d - 1] == 0) continue;
      for (std::size_t q = 1; q <= N / d; ++q)
        c[d * q - 1] = checked::add(c[d * q - 1], checked::mul(av[d - 1], bv[q - 1]));
    }
    return ValueTable(result_spec, 1, std::move(c));
  }
  std::vector<double> ar(N), br(N), c(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    ar[i] = a.at(i).to_double();
    br[i] = b.at(i).to_double();
  }
  for (std::size_t d = 1; d <= N; ++d) {
    if (ar[d - 1] == 0.0) continue;
    for (std::size_t q = 1; q <= N / d; ++q) c[d * q - 1] += ar[d - 1] * br[q - 1];
  }
  return ValueTable(result_spec, 1, std::move(c));
}

ValueTable dirichlet_inverse_prefix(const FunctionSpec& g, std::uint64_t N,
                                    const ComputeOptions& opts) {
  const FunctionSpec inv = FunctionSpec::dirichlet_inverse(g);  // validates g(1) != 0
  if (N < 1) throw PreconditionError("dirichlet_inverse_prefix: N must be >= 1");
  check_cap(N, opts, "dirichlet_inverse_prefix");
  const ValueTable gt = sieve_range(g, 1, N, opts);

  // Once inv(q) is known it feeds every multiple d*q, d >= 2; all of those
  // contributions to n come from q < n, so a single increasing pass works.
  if (inv.exact()) {
    const auto gv = gt.integers();
    const std::int64_t g1 = gv[0];  // +-1, its own inverse
    std::vector<std::int64_t> acc(N, 0), out(N, 0);
    for (std::uint64_t q = 1; q <= N; ++q) {
      out[q - 1] = q == 1 ? g1 : checked::mul(-g1, acc[q - 1]);
      if (out[q - 1] == 0) continue;
      for (std::uint64_t d = 2; d <= N / q; ++d)
        acc[d * q - 1] = checked::add(acc[d * q - 1], checked::mul(gv[d - 1], out[q - 1]));
    }
    return ValueTable(inv, 1, std::move(out));
  }
  std::vector<double> gv(N);
  for (std::size_t i = 0; i < N; ++i) gv[i] = gt.at(i).to_double();
  const double scale = 1.0 / gv[0];
  std::vector<double> acc(N, 0.0), out(N, 0.0);
  for (std::uint64_t q = 1; q <= N; ++q) {
    out[q - 1] = q == 1 ? scale : -scale * acc[q - 1];
    if (out[q - 1] == 0.0) continue;
    for (std::uint64_t d = 2; d <= N / q; ++d) acc[d * q - 1] += gv[d - 1] * out[q - 1];
  }
  return ValueTable(inv, 1, std::move(out));
}

ValueTable eratosthenes_transform(const FunctionSpec& F, std::uint64_t N,
                                  const ComputeOptions& opts) {
  if (N < 1) throw PreconditionError("eratosthenes_transform: N must be >= 1");
  check_cap(N, opts, "eratosthenes_transform");
  const ValueTable ft = sieve_range(F, 1, N, opts);
  const ValueTable mu = sieve_range(FunctionSpec::mobius(), 1, N, opts);
  return convolve_prefix_tables(ft, mu, FunctionSpec::convolution(F, FunctionSpec::mobius()));
}

ValueTable von_mangoldt_attached(const FunctionSpec& g, std::uint64_t N,
                                 const ComputeOptions& opts) {
  const FunctionSpec result = FunctionSpec::lambda_attached(g);  // validates g(1) != 0
  if (N < 1) throw PreconditionError("von_mangoldt_attached: N must be >= 1");
  const ValueTable inv = dirichlet_inverse_prefix(g, N, opts);
  const ValueTable glog =
      sieve_range(FunctionSpec::pointwise_product(g, FunctionSpec::log_pow(1)), 1, N, opts);
  return convolve_prefix_tables(glog, inv, result);
}

Value short_sum_bruteforce(const FunctionSpec& spec, std::uint64_t x, std::uint64_t y,
                           const ComputeOptions& opts) {
  if (y == 0) return spec.exact() ? Value::exact(0) : Value::real(0.0);
  if (x > kMaxArgument - y) throw PreconditionError("short_sum_bruteforce: x + y exceeds 2^63 - 1");
  if (opts.segment_cap == 0) throw PreconditionError("short_sum_bruteforce: segment cap is zero");
  const Evaluator ev(spec);
  const WindowFactorizer wf(x + y);
  int128 exact_total = 0;
  OrderedSum real_total;
  for (std::uint64_t lo = x + 1; lo <= x + y;) {
    const std::uint64_t hi = std::min<std::uint64_t>(x + y, lo + (opts.segment_cap - 1));
    const ValueTable seg = sieve_with(ev, wf, lo, hi, opts.threads);
    if (seg.exact()) {
      for (std::int64_t v : seg.integers()) exact_total = checked::add(exact_total, int128{v});
    } else {
      for (double v : seg.reals()) real_total.add(v);
    }
    if (hi == x + y) break;
    lo = hi + 1;
  }
  return ev.exact() ? Value::exact(exact_total) : Value::real(real_total.total());
}

}  // namespace hyplab
