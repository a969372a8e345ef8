#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "hyplab/function_spec.hpp"
#include "hyplab/parallel.hpp"
#include "hyplab/value.hpp"

namespace hyplab {

/// Exact values of one function on the contiguous range [lo, hi].
class ValueTable {
 public:
  ValueTable(FunctionSpec spec, std::uint64_t lo, std::vector<std::int64_t> values);
  ValueTable(FunctionSpec spec, std::uint64_t lo, std::vector<double> values);

  const FunctionSpec& spec() const noexcept { return spec_; }
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return lo_ + size() - 1; }
  std::size_t size() const noexcept;
  bool exact() const noexcept { return std::holds_alternative<std::vector<std::int64_t>>(values_); }

  /// Entry for n = lo + i.
  Value at(std::size_t i) const;
  /// Entry for n itself; precondition lo <= n <= hi.
  Value value_of(std::uint64_t n) const { return at(n - lo_); }

  std::span<const std::int64_t> integers() const;
  std::span<const double> reals() const;

  /// Sum of all entries; 128-bit exact or a fixed-order double sum.
  Value sum() const;

  friend bool operator==(const ValueTable& a, const ValueTable& b);

 private:
  FunctionSpec spec_;
  std::uint64_t lo_;
  std::variant<std::vector<std::int64_t>, std::vector<double>> values_;
};

inline constexpr std::uint64_t kMaxArgument = (std::uint64_t{1} << 63) - 1;

Value evaluate_point(const FunctionSpec& spec, std::uint64_t n);

/// Window table via the segmented factorization sieve. Throws ResourceError
/// when hi - lo + 1 exceeds opts.segment_cap.
ValueTable sieve_range(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi,
                       const ComputeOptions& opts = {});

/// sum_{d | n} f(d) g(n/d).
Value dirichlet_convolve_point(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t n);

/// g^{*-1} on [1, N] by the divisor recurrence. Throws InvalidSpecError if g(1) = 0.
ValueTable dirichlet_inverse_prefix(const FunctionSpec& g, std::uint64_t N,
                                    const ComputeOptions& opts = {});

/// (F * mu) on [1, N].
ValueTable eratosthenes_transform(const FunctionSpec& F, std::uint64_t N,
                                  const ComputeOptions& opts = {});

/// Lambda_g = (g log) * g^{*-1} on [1, N].
ValueTable von_mangoldt_attached(const FunctionSpec& g, std::uint64_t N,
                                 const ComputeOptions& opts = {});

/// Dirichlet convolution of two tables that both start at 1 and have the
/// same length.
ValueTable convolve_prefix_tables(const ValueTable& a, const ValueTable& b,
                                  const FunctionSpec& result_spec);

/// sum_{x < n <= x + y} spec(n). x = 0 gives a prefix sum. Windows longer
/// than the segment cap are processed segment by segment; the result does
/// not depend on the cap or the thread count.
Value short_sum_bruteforce(const FunctionSpec& spec, std::uint64_t x, std::uint64_t y,
                           const ComputeOptions& opts = {});

/// Block length used by every deterministic double summation.
inline constexpr std::size_t kSumBlock = 4096;

/// Folds values in blocks of kSumBlock aligned at absolute position 0, so
/// that segmenting a stream never changes the result.
class OrderedSum {
 public:
  void add(double v) {
    block_ += v;
    if (++filled_ == kSumBlock) flush();
  }
  double total() const { return total_ + block_; }

 private:
  void flush() {
    total_ += block_;
    block_ = 0.0;
    filled_ = 0;
  }
  double total_ = 0.0;
  double block_ = 0.0;
  std::size_t filled_ = 0;
};

}  // namespace hyplab
