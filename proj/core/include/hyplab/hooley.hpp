#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyplab/factorization.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab {

struct DivisorList {
  std::uint64_t n = 1;
  std::vector<std::uint64_t> divisors;  // ascending, 1 ... n
};

DivisorList divisors(std::uint64_t n);

/// Hooley's Delta_r(n): the largest number of (r-1)-tuples (d_1, ..., d_{r-1})
/// with d_1 ... d_{r-1} | n and e^{u_i} < d_i <= e^{u_i + 1}, maximised over
/// real u_i.
struct DeltaValue {
  std::uint64_t n = 1;
  int r = 2;
  std::uint64_t value = 1;
  /// One maximising choice of u_1, ..., u_{r-1}.
  std::vector<double> witness;
};

/// Exact Delta_r for r in {2, 3, 4}. Throws ResourceError if tau(n)^{r-1}
/// or the number of tuples actually examined exceeds opts.work_cap.
DeltaValue delta_r(std::uint64_t n, int r, const ComputeOptions& opts = {});
DeltaValue delta_r(const Factorization& f, int r, const ComputeOptions& opts = {});

/// Number of tuples counted by Delta_r(n) for the given window parameters u.
/// r is u.size() + 1. Direct enumeration, meant for checking witnesses.
std::uint64_t window_count(std::uint64_t n, std::span<const double> u);

/// Maximum of window_count over the grid u_i = -1 + k * grid_step inside
/// [-1, log n]. r in {2, 3}; grid_step <= 1e-3.
std::uint64_t delta_r_grid_oracle(std::uint64_t n, int r, double grid_step);

/// sum over d | n with N < d <= 2N of tau_r(d), tau_1 = 1.
std::uint64_t dyadic_divisor_tau_sum(std::uint64_t n, int r, std::uint64_t N);

struct DyadicCheck {
  std::uint64_t lhs = 0;
  double rhs = 0.0;
  bool holds = true;
};

/// lhs = dyadic_divisor_tau_sum(n, r, N), rhs = (log 2eN)^{r-1} Delta_{r+1}(n).
/// r in {1, 2, 3}.
DyadicCheck lemma5_check(std::uint64_t n, int r, std::uint64_t N, const ComputeOptions& opts = {});

/// sum_{x < n <= x + y} Delta_r(n).
std::uint64_t delta_short_sum(int r, std::uint64_t x, std::uint64_t y,
                              const ComputeOptions& opts = {});

/// sum_{n <= x} Delta_r(n) / n.
double delta_weighted_prefix(int r, std::uint64_t x, const ComputeOptions& opts = {});

/// Exact test of m < e * b for positive integers.
bool less_than_e_times(std::uint64_t m, std::uint64_t b);

}  // namespace hyplab
