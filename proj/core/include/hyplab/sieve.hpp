#pragma once

#include <cstdint>
#include <vector>

#include "hyplab/factorization.hpp"

namespace hyplab {

/// Factors every integer of a window [lo, hi] by sieving with the primes up
/// to sqrt(hi). Any cofactor left after sieving is prime.
class WindowFactorizer {
 public:
  /// Entries handled per internal block.
  static constexpr std::size_t block_size = 16384;

  /// Prepares base primes sufficient for windows with hi <= max_hi.
  explicit WindowFactorizer(std::uint64_t max_hi);

  std::uint64_t max_hi() const noexcept { return max_hi_; }
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
  /// Trial division for one n <= max_hi().
  Factorization factor(std::uint64_t n) const { return factorize_with(n, primes_, isqrt(max_hi_)); }

  /// Calls fn(offset, factorization) for each n = lo + offset in [lo, hi],
  /// in increasing order. Precondition: 1 <= lo <= hi <= max_hi(),
  /// hi - lo < block_size.
  template <class Fn>
  void for_each_in_block(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const;

 private:
  struct Scratch;
  void factor_block(std::uint64_t lo, std::uint64_t hi, Scratch& s) const;

  std::uint64_t max_hi_;
  std::vector<std::uint32_t> primes_;
};

struct WindowFactorizer::Scratch {
  std::vector<std::uint64_t> rest;
  std::vector<std::uint8_t> count;
  std::vector<std::uint32_t> prime;    // block_size * 15
  std::vector<std::uint8_t> exponent;  // block_size * 15
};

template <class Fn>
void WindowFactorizer::for_each_in_block(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
  thread_local Scratch s;
  factor_block(lo, hi, s);
  const std::size_t len = hi - lo + 1;
  for (std::size_t i = 0; i < len; ++i) {
    Factorization f(lo + i);
    const std::size_t base = i * Factorization::max_primes;
    for (std::size_t j = 0; j < s.count[i]; ++j) f.push(s.prime[base + j], s.exponent[base + j]);
    if (s.rest[i] > 1) f.push(s.rest[i], 1);
    fn(i, f);
  }
}

}  // namespace hyplab
