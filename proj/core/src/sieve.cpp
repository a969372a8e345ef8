#include "hyplab/sieve.hpp"

#include "hyplab/errors.hpp"

namespace hyplab {

WindowFactorizer::WindowFactorizer(std::uint64_t max_hi)
    : max_hi_(max_hi), primes_(primes_up_to(isqrt(max_hi))) {}

void WindowFactorizer::factor_block(std::uint64_t lo, std::uint64_t hi, Scratch& s) const {
  if (lo < 1 || hi < lo || hi > max_hi_ || hi - lo >= block_size)
    throw PreconditionError("WindowFactorizer: bad block [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  const std::size_t len = hi - lo + 1;
  s.rest.resize(len);
  s.count.assign(len, 0);
  s.prime.resize(len * Factorization::max_primes);
  s.exponent.resize(len * Factorization::max_primes);
  for (std::size_t i = 0; i < len; ++i) s.rest[i] = lo + i;

  for (const std::uint32_t p32 : primes_) {
    const std::uint64_t p = p32;
    if (p > hi / p) break;
    std::uint64_t first = (lo + p - 1) / p * p;
    for (std::uint64_t m = first; m <= hi; m += p) {
      const std::size_t i = m - lo;
      std::uint64_t r = s.rest[i] / p;
      std::uint8_t e = 1;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      s.rest[i] = r;
      const std::size_t slot = i * Factorization::max_primes + s.count[i]++;
      s.prime[slot] = p32;
      s.exponent[slot] = e;
    }
  }
}

}  // namespace hyplab
