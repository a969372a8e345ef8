#include "hyplab/hooley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "hyplab/arith.hpp"
#include "hyplab/checked.hpp"
#include "hyplab/errors.hpp"
#include "hyplab/evaluator.hpp"
#include "hyplab/function_spec.hpp"
#include "hyplab/sieve.hpp"

namespace hyplab {

namespace {

// e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
std::uint64_t e_term(std::uint64_t i) {
  if (i == 0) return 2;
  return i % 3 == 2 ? 2 * (i + 1) / 3 : 1;
}

bool less_than_e_exact(std::uint64_t p, std::uint64_t q) {
  for (std::uint64_t i = 0;; ++i) {
    const std::uint64_t a = p / q, rem = p % q;
    const std::uint64_t b = e_term(i);
    if (a != b) return (a < b) != (i % 2 == 1);
    if (rem == 0) return i % 2 == 0;
    p = q;
    q = rem;
  }
}

class WorkMeter {
 public:
  explicit WorkMeter(std::uint64_t cap) : cap_(cap) {}
  void add(std::uint64_t k) {
    used_ += k;
    if (used_ > cap_)
      throw ResourceError("delta_r: work cap of " + std::to_string(cap_) + " tuples exceeded");
  }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
};

// Divisors in ascending order, cross-referenced with lattice indices.
struct SortedDivisors {
  std::vector<std::uint64_t> value;
  std::vector<std::size_t> lattice_index;
  std::vector<std::size_t> rank;  // lattice index -> position in value
  std::vector<std::size_t> end;   // first position whose value is >= e * value[k]

  explicit SortedDivisors(const DivisorLattice& L) {
    const std::size_t t = L.size();
    lattice_index.resize(t);
    for (std::size_t i = 0; i < t; ++i) lattice_index[i] = i;
    std::sort(lattice_index.begin(), lattice_index.end(),
              [&](std::size_t a, std::size_t b) { return L.divisor(a) < L.divisor(b); });
    value.resize(t);
    rank.resize(t);
    for (std::size_t k = 0; k < t; ++k) {
      value[k] = L.divisor(lattice_index[k]);
      rank[lattice_index[k]] = k;
    }
    end.resize(t);
    std::size_t j = 0;
    for (std::size_t k = 0; k < t; ++k) {
      j = std::max(j, k);
      while (j < t && less_than_e_times(value[j], value[k])) ++j;
      end[k] = j;
    }
  }

  // Window parameter u with (e^u, e^{u+1}] holding exactly the divisors in
  // [value[k], e * value[k]).
  double left_parameter(std::size_t k) const {
    const double a = static_cast<double>(value[k]);
    double eta = 1.0 - std::log(static_cast<double>(value[end[k] - 1]) / a);
    if (k > 0) eta = std::min(eta, std::log(a / static_cast<double>(value[k - 1])));
    return std::log(a) - eta / 2;
  }

  std::size_t position_of(std::uint64_t d) const {
    return static_cast<std::size_t>(std::lower_bound(value.begin(), value.end(), d) - value.begin());
  }
};

// Largest number of entries of `m` inside one window [b, e b); returns the
// count and the left end b.
std::pair<std::uint64_t, std::uint64_t> best_window(std::vector<std::uint64_t>& m) {
  std::sort(m.begin(), m.end());
  std::uint64_t best = 0, left = 1;
  std::size_t j = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i > 0 && m[i] == m[i - 1]) continue;
    j = std::max(j, i);
    while (j < m.size() && less_than_e_times(m[j], m[i])) ++j;
    if (j - i > best) {
      best = j - i;
      left = m[i];
    }
  }
  return {best, left};
}

void check_r(int r, int lo, int hi, const char* op) {
  if (r < lo || r > hi)
    throw PreconditionError(std::string(op) + ": r must lie in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "], got " + std::to_string(r));
}

void check_n(std::uint64_t n, const char* op) {
  if (n < 1 || n > kMaxArgument)
    throw PreconditionError(std::string(op) + ": n must lie in [1, 2^63 - 1]");
}

}  // namespace

bool less_than_e_times(std::uint64_t m, std::uint64_t b) {
  const double ratio = static_cast<double>(m) / static_cast<double>(b);
  constexpr double e = std::numbers::e;
  if (ratio < e * (1 - 1e-12)) return true;
  if (ratio > e * (1 + 1e-12)) return false;
  return less_than_e_exact(m, b);
}

DivisorList divisors(std::uint64_t n) {
  check_n(n, "divisors");
  const DivisorLattice L(factorize(n));
  DivisorList out{n, {L.divisors().begin(), L.divisors().end()}};
  std::sort(out.divisors.begin(), out.divisors.end());
  return out;
}

DeltaValue delta_r(std::uint64_t n, int r, const ComputeOptions& opts) {
  check_n(n, "delta_r");
  return delta_r(factorize(n), r, opts);
}

DeltaValue delta_r(const Factorization& f, int r, const ComputeOptions& opts) {
  check_r(r, 2, 4, "delta_r");
  const std::uint64_t tau = f.divisor_count();
  double pre = 1;
  for (int i = 1; i < r; ++i) pre *= static_cast<double>(tau);
  if (pre > static_cast<double>(opts.work_cap))
    throw ResourceError("delta_r: tau(n)^(r-1) = " + format_double(pre) + " exceeds the work cap of " +
                        std::to_string(opts.work_cap));

  const DivisorLattice L(f);
  const SortedDivisors S(L);
  const std::size_t t = S.value.size();
  WorkMeter work(opts.work_cap);
  DeltaValue out{f.n(), r, 0, {}};

  if (r == 2) {
    std::size_t arg = 0;
    for (std::size_t k = 0; k < t; ++k)
      if (S.end[k] - k > out.value) {
        out.value = S.end[k] - k;
        arg = k;
      }
    out.witness = {S.left_parameter(arg)};
    return out;
  }

  // number of divisors of the divisor at each lattice index
  std::vector<std::uint64_t> tau_at(L.size(), 1);
  for (std::size_t i = 0; i < L.size(); ++i) {
    std::size_t rest = i;
    for (std::size_t j = f.size(); j-- > 0;) {
      tau_at[i] *= rest / L.stride(j) + 1;
      rest %= L.stride(j);
    }
  }

  std::vector<std::uint64_t> m;
  auto push_divisors_of = [&](std::size_t q_idx) {
    L.for_each_divisor_of(q_idx, [&](std::size_t e_idx, std::size_t) { m.push_back(L.divisor(e_idx)); });
  };
  // A window holding the quotients q contributes at most sum tau(q); trying
  // candidates in decreasing order of that bound lets most of them be skipped.
  struct Candidate {
    std::uint64_t bound;
    std::size_t first, last;
  };
  auto by_bound = [](const Candidate& a, const Candidate& b) {
    return a.bound != b.bound ? a.bound > b.bound : a.first < b.first;
  };

  if (r == 3) {
    std::vector<Candidate> cands;
    for (std::size_t k1 = 0; k1 < t; ++k1) {
      std::uint64_t bound = 0;
      for (std::size_t p = k1; p < S.end[k1]; ++p) bound += tau_at[L.last() - S.lattice_index[p]];
      cands.push_back({bound, k1, S.end[k1]});
    }
    std::sort(cands.begin(), cands.end(), by_bound);
    for (const auto& c : cands) {
      if (c.bound <= out.value) break;
      m.clear();
      for (std::size_t p = c.first; p < c.last; ++p) push_divisors_of(L.last() - S.lattice_index[p]);
      work.add(m.size());
      const auto [count, left] = best_window(m);
      if (count > out.value) {
        out.value = count;
        out.witness = {S.left_parameter(c.first), S.left_parameter(S.position_of(left))};
      }
    }
    return out;
  }

  struct Pair {
    std::uint64_t d2;
    std::size_t q2;
  };
  std::vector<Pair> pairs;
  std::vector<std::uint64_t> prefix;
  std::vector<Candidate> cands;
  for (std::size_t k1 = 0; k1 < t; ++k1) {
    pairs.clear();
    for (std::size_t p = k1; p < S.end[k1]; ++p)
      L.for_each_divisor_of(L.last() - S.lattice_index[p], [&](std::size_t e2, std::size_t q2) {
        pairs.push_back({L.divisor(e2), q2});
      });
    work.add(pairs.size());
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d2 < b.d2; });
    prefix.assign(pairs.size() + 1, 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) prefix[i + 1] = prefix[i] + tau_at[pairs[i].q2];
    if (prefix.back() <= out.value) continue;
    cands.clear();
    std::size_t j = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i > 0 && pairs[i].d2 == pairs[i - 1].d2) continue;
      j = std::max(j, i);
      while (j < pairs.size() && less_than_e_times(pairs[j].d2, pairs[i].d2)) ++j;
      cands.push_back({prefix[j] - prefix[i], i, j});
    }
    std::sort(cands.begin(), cands.end(), by_bound);
    for (const auto& c : cands) {
      if (c.bound <= out.value) break;
      m.clear();
      for (std::size_t i = c.first; i < c.last; ++i) push_divisors_of(pairs[i].q2);
      work.add(m.size());
      const auto [count, left] = best_window(m);
      if (count > out.value) {
        out.value = count;
        out.witness = {S.left_parameter(k1), S.left_parameter(S.position_of(pairs[c.first].d2)),
                       S.left_parameter(S.position_of(left))};
      }
    }
  }
  return out;
}

std::uint64_t window_count(std::uint64_t n, std::span<const double> u) {
  check_n(n, "window_count");
  const DivisorList dl = divisors(n);
  std::vector<double> logs(dl.divisors.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(static_cast<double>(dl.divisors[i]));
  auto rec = [&](auto&& self, std::size_t coord, std::uint64_t rest) -> std::uint64_t {
    if (coord == u.size()) return 1;
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < logs.size() && dl.divisors[i] <= rest; ++i)
      if (rest % dl.divisors[i] == 0 && logs[i] > u[coord] && logs[i] <= u[coord] + 1)
        c += self(self, coord + 1, rest / dl.divisors[i]);
    return c;
  };
  return rec(rec, 0, n);
}

std::uint64_t delta_r_grid_oracle(std::uint64_t n, int r, double grid_step) {
  check_n(n, "delta_r_grid_oracle");
  check_r(r, 2, 3, "delta_r_grid_oracle");
  if (!(grid_step > 0) || grid_step > 1e-3)
    throw PreconditionError("delta_r_grid_oracle: grid_step must lie in (0, 1e-3]");
  const double top = std::log(static_cast<double>(n));
  const auto K = static_cast<std::int64_t>(std::floor((top + 1) / grid_step));
  auto grid = [&](std::int64_t k) { return -1.0 + static_cast<double>(k) * grid_step; };

  // The count is constant between the breakpoints u = v and u = v - 1, so
  // the grid maximum is attained at a grid point next to one of them.
  auto candidates = [&](const std::vector<double>& sorted_logs) {
    std::vector<std::int64_t> ks{0};
    for (double v : sorted_logs)
      for (double b : {v, v - 1}) {
        const auto k = static_cast<std::int64_t>(std::floor((b + 1) / grid_step));
        for (std::int64_t c = k - 1; c <= k + 2; ++c)
          if (c >= 0 && c <= K) ks.push_back(c);
      }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
  };
  // [first, last) positions of sorted values inside (u, u + 1]
  auto window = [](const std::vector<double>& v, double u) {
    const auto a = std::upper_bound(v.begin(), v.end(), u) - v.begin();
    const auto b = std::upper_bound(v.begin(), v.end(), u + 1) - v.begin();
    return std::pair<std::size_t, std::size_t>(a, b);
  };

  const DivisorList dl = divisors(n);
  std::vector<double> logs(dl.divisors.size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(static_cast<double>(dl.divisors[i]));

  auto max_over_grid = [&](const std::vector<double>& v) {
    std::uint64_t best = 0;
    for (auto k : candidates(v)) {
      const auto [a, b] = window(v, grid(k));
      best = std::max<std::uint64_t>(best, b - a);
    }
    return best;
  };

  if (r == 2) return max_over_grid(logs);

  std::set<std::pair<std::size_t, std::size_t>> ranges;
  for (auto k : candidates(logs)) ranges.insert(window(logs, grid(k)));
  std::uint64_t best = 0;
  std::vector<double> inner;
  for (const auto& [a, b] : ranges) {
    inner.clear();
    for (std::size_t i = a; i < b; ++i) {
      const std::uint64_t rest = n / dl.divisors[i];
      for (std::size_t j = 0; j < dl.divisors.size() && dl.divisors[j] <= rest; ++j)
        if (rest % dl.divisors[j] == 0) inner.push_back(logs[j]);
    }
    if (inner.size() <= best) continue;
    std::sort(inner.begin(), inner.end());
    best = std::max(best, max_over_grid(inner));
  }
  return best;
}

std::uint64_t dyadic_divisor_tau_sum(std::uint64_t n, int r, std::uint64_t N) {
  check_n(n, "dyadic_divisor_tau_sum");
  if (r < 1) throw PreconditionError("dyadic_divisor_tau_sum: r must be >= 1");
  if (N < 1) throw PreconditionError("dyadic_divisor_tau_sum: N must be >= 1");
  const DivisorLattice L(factorize(n));
  const auto tau = Evaluator(FunctionSpec::tau_m(r)).integer_lattice(L);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const std::uint64_t d = L.divisor(i);
    if (d > N && d - N <= N) s = checked::add(s, tau[i]);
  }
  return static_cast<std::uint64_t>(s);
}

DyadicCheck lemma5_check(std::uint64_t n, int r, std::uint64_t N, const ComputeOptions& opts) {
  check_r(r, 1, 3, "lemma5_check");
  DyadicCheck out;
  out.lhs = dyadic_divisor_tau_sum(n, r, N);
  const double lg = std::log(2.0) + 1.0 + std::log(static_cast<double>(N));
  out.rhs = std::pow(lg, r - 1) * static_cast<double>(delta_r(n, r + 1, opts).value);
  out.holds = static_cast<double>(out.lhs) <= out.rhs;
  return out;
}

namespace {

// Calls fn(offset, factorization) for every n in [lo, hi], in parallel over
// sieve blocks; fn must only write to slot `offset`.
template <class Fn>
void factor_window(const WindowFactorizer& wf, std::uint64_t lo, std::uint64_t hi, unsigned threads,
                   Fn&& fn) {
  const std::uint64_t len = hi - lo + 1;
  const std::size_t blocks = (len + WindowFactorizer::block_size - 1) / WindowFactorizer::block_size;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::uint64_t blo = lo + b * WindowFactorizer::block_size;
    const std::uint64_t bhi = std::min<std::uint64_t>(hi, blo + WindowFactorizer::block_size - 1);
    wf.for_each_in_block(blo, bhi, [&](std::size_t i, const Factorization& f) {
      fn(blo - lo + i, f);
    });
  });
}

template <class Fn>
void for_each_segment(std::uint64_t lo, std::uint64_t hi, std::size_t cap, Fn&& fn) {
  if (cap == 0) throw PreconditionError("segment cap is zero");
  for (std::uint64_t s = lo; s <= hi;) {
    const std::uint64_t e = std::min<std::uint64_t>(hi, s + (cap - 1));
    fn(s, e);
    if (e == hi) break;
    s = e + 1;
  }
}

}  // namespace

std::uint64_t delta_short_sum(int r, std::uint64_t x, std::uint64_t y, const ComputeOptions& opts) {
  check_r(r, 2, 4, "delta_short_sum");
  if (y == 0) return 0;
  if (x > kMaxArgument - y) throw PreconditionError("delta_short_sum: x + y exceeds 2^63 - 1");
  const WindowFactorizer wf(x + y);
  std::uint64_t total = 0;
  std::vector<std::uint64_t> vals;
  for_each_segment(x + 1, x + y, opts.segment_cap, [&](std::uint64_t lo, std::uint64_t hi) {
    vals.assign(hi - lo + 1, 0);
    factor_window(wf, lo, hi, opts.threads,
                  [&](std::size_t i, const Factorization& f) { vals[i] = delta_r(f, r, opts).value; });
    for (auto v : vals) total = static_cast<std::uint64_t>(checked::add(static_cast<std::int64_t>(total),
                                                                        static_cast<std::int64_t>(v)));
  });
  return total;
}

double delta_weighted_prefix(int r, std::uint64_t x, const ComputeOptions& opts) {
  check_r(r, 2, 4, "delta_weighted_prefix");
  if (x == 0) return 0.0;
  if (x > kMaxArgument) throw PreconditionError("delta_weighted_prefix: x exceeds 2^63 - 1");
  const WindowFactorizer wf(x);
  OrderedSum total;
  std::vector<double> vals;
  for_each_segment(1, x, opts.segment_cap, [&](std::uint64_t lo, std::uint64_t hi) {
    vals.assign(hi - lo + 1, 0.0);
    factor_window(wf, lo, hi, opts.threads, [&](std::size_t i, const Factorization& f) {
      vals[i] = static_cast<double>(delta_r(f, r, opts).value) / static_cast<double>(f.n());
    });
    for (double v : vals) total.add(v);
  });
  return total.total();
}

}  // namespace hyplab
