#pragma once

#include <cstdint>
#include <string>

#include "hyplab/checked.hpp"
#include "hyplab/function_spec.hpp"
#include "hyplab/parallel.hpp"
#include "hyplab/value.hpp"

namespace hyplab {

/// A positive real cut point held as an exact fraction num / den, so that
/// every floor taken against it is exact.
class Threshold {
 public:
  static Threshold integer(std::uint64_t t);
  /// The exact binary value of t. Requires 1 <= t < 2^63.
  static Threshold real(double t);

  int128 num() const noexcept { return num_; }
  int128 den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept;
  std::string to_string() const;

  /// floor(T)
  std::uint64_t floor() const noexcept { return static_cast<std::uint64_t>(num_ / den_); }
  /// floor(x / T)
  std::uint64_t floor_div(std::uint64_t x) const noexcept {
    return static_cast<std::uint64_t>(static_cast<int128>(x) * den_ / num_);
  }
  /// T * y >= x
  bool times_at_least(std::uint64_t y, std::uint64_t x) const noexcept {
    return num_ * static_cast<int128>(y) >= static_cast<int128>(x) * den_;
  }
  friend bool operator<(const Threshold& a, std::uint64_t b) noexcept { return a.num_ < static_cast<int128>(b) * a.den_; }
  friend bool operator>(const Threshold& a, std::uint64_t b) noexcept { return a.num_ > static_cast<int128>(b) * a.den_; }

 private:
  Threshold(int128 num, int128 den) : num_(num), den_(den) {}
  int128 num_;
  int128 den_;
};

/// The exact short-interval hyperbola identity
///   sum_{x < n <= x + y} (f * g)(n) = term_d + term_k + boundary_S2
/// with term_d over d <= T, term_k over k <= x / T, and the single boundary
/// integer q = floor((x + y) / T) when it exceeds floor(x / T).
struct HyperbolaDecomposition {
  Value term_d;
  Value term_k;
  Value boundary_S2;
  Value total;
  Threshold T = Threshold::integer(1);
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  /// Outer terms evaluated: floor(T) + floor(x / T) + (1 if the boundary is live).
  std::uint64_t outer_terms = 0;
};

struct HyperbolaOptions {
  ComputeOptions compute;
  /// Inner sums whose upper end is at most this use a sieved prefix table.
  std::uint64_t prefix_limit = std::uint64_t{1} << 20;
  /// Inner windows at least this long are sieved, shorter ones are
  /// evaluated pointwise.
  std::uint64_t sieve_window_min = 64;
};

/// Requires 1 <= y, max(y, x / y) <= T <= x. The precondition error names the
/// failed inequality.
HyperbolaDecomposition short_hyperbola(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t x,
                                       std::uint64_t y, const Threshold& T,
                                       const HyperbolaOptions& opts = {});

/// sum_{n <= x} (f * g)(n) = sum_{d <= T} f(d) G(x/d) + sum_{k <= x/T} g(k) F(x/k) - F(T) G(x/T).
/// Requires 1 <= T <= x and x within the segment cap.
Value long_hyperbola(const FunctionSpec& f, const FunctionSpec& g, std::uint64_t x, const Threshold& T,
                     const ComputeOptions& opts = {});

/// psi(t) = t - floor(t) - 1/2
double psi(double t);
/// distance from t to the nearest integer
double dist_to_nearest_int(double t);

/// sum_{N < n <= 2N} f(n) (psi((x + y)/n) - psi(x/n)), fractional parts taken
/// exactly from integer remainders. Requires y < N <= x.
double sigma_F(const FunctionSpec& f, std::uint64_t N, std::uint64_t x, std::uint64_t y,
               const ComputeOptions& opts = {});

}  // namespace hyplab
