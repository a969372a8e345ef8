#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hyplab {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
};

/// Prime factorization of a positive integer below 2^63. At most 15 distinct
/// primes fit under 2^64, so storage is inline.
class Factorization {
 public:
  static constexpr std::size_t max_primes = 15;

  Factorization() = default;
  explicit Factorization(std::uint64_t n) : n_(n) {}

  std::uint64_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  const PrimePower& operator[](std::size_t i) const { return parts_[i]; }
  std::span<const PrimePower> parts() const { return {parts_.data(), count_}; }

  /// Appends p^e; primes must be pushed in ascending order.
  void push(std::uint64_t p, std::uint32_t e) { parts_[count_++] = {p, e}; }

  /// Number of divisors (product of exponent + 1).
  std::uint64_t divisor_count() const noexcept;

 private:
  std::uint64_t n_ = 1;
  std::array<PrimePower, max_primes> parts_{};
  std::size_t count_ = 0;
};

/// Primes <= limit by a plain sieve of Eratosthenes.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// floor(sqrt(n)) exactly.
std::uint64_t isqrt(std::uint64_t n) noexcept;

/// Trial division with a 2-3 wheel; the leftover cofactor is prime.
Factorization factorize(std::uint64_t n);

/// Trial division by a precomputed list of all primes <= covered, which must
/// reach sqrt(n). covered = 0 means the last listed prime.
Factorization factorize_with(std::uint64_t n, std::span<const std::uint32_t> primes,
                             std::uint64_t covered = 0);

/// All divisors of n laid out in mixed radix: the divisor with exponent digits
/// (a_1, ..., a_k) sits at index sum a_i * stride_i. If e | d then
/// index(d / e) = index(d) - index(e), and every proper divisor of d has a
/// smaller index than d.
class DivisorLattice {
 public:
  explicit DivisorLattice(const Factorization& f);

  const Factorization& factorization() const noexcept { return fac_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t last() const noexcept { return values_.size() - 1; }
  std::uint64_t divisor(std::size_t idx) const { return values_[idx]; }
  std::span<const std::uint64_t> divisors() const { return values_; }
  std::size_t stride(std::size_t prime_slot) const { return strides_[prime_slot]; }

  /// Calls fn(e_idx, quotient_idx) for every divisor e of the divisor at d_idx.
  template <class Fn>
  void for_each_divisor_of(std::size_t d_idx, Fn&& fn) const {
    const std::size_t k = fac_.size();
    std::array<std::uint32_t, Factorization::max_primes> bound{};
    std::size_t rest = d_idx;
    for (std::size_t i = k; i-- > 0;) {
      bound[i] = static_cast<std::uint32_t>(rest / strides_[i]);
      rest %= strides_[i];
    }
    std::array<std::uint32_t, Factorization::max_primes> digit{};
    std::size_t e_idx = 0;
    for (;;) {
      fn(e_idx, d_idx - e_idx);
      std::size_t i = 0;
      for (; i < k; ++i) {
        if (digit[i] < bound[i]) {
          ++digit[i];
          e_idx += strides_[i];
          break;
        }
        e_idx -= digit[i] * strides_[i];
        digit[i] = 0;
      }
      if (i == k) return;
    }
  }

 private:
  Factorization fac_;
  std::array<std::size_t, Factorization::max_primes> strides_{};
  std::vector<std::uint64_t> values_;
};

}  // namespace hyplab
