#include "hyplab/factorization.hpp"

#include <cmath>

#include "hyplab/errors.hpp"

namespace hyplab {

std::uint64_t Factorization::divisor_count() const noexcept {
  std::uint64_t t = 1;
  for (std::size_t i = 0; i < count_; ++i) t *= parts_[i].exponent + 1;
  return t;
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

void check_range(std::uint64_t n) {
  if (n == 0) throw PreconditionError("factorize: n must be >= 1");
  if (n > (std::uint64_t{1} << 63) - 1)
    throw PreconditionError("factorize: n must be <= 2^63 - 1");
}

// Strips p from m; returns the exponent.
std::uint32_t strip(std::uint64_t& m, std::uint64_t p) {
  std::uint32_t e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  check_range(n);
  Factorization f(n);
  std::uint64_t m = n;
  for (std::uint64_t p : {2u, 3u}) {
    if (auto e = strip(m, p)) f.push(p, e);
  }
  // 6k - 1, 6k + 1
  for (std::uint64_t p = 5, step = 2; p <= m / p; p += step, step = 6 - step) {
    if (auto e = strip(m, p)) f.push(p, e);
  }
  if (m > 1) f.push(m, 1);
  return f;
}

Factorization factorize_with(std::uint64_t n, std::span<const std::uint32_t> primes,
                             std::uint64_t covered) {
  check_range(n);
  Factorization f(n);
  std::uint64_t m = n;
  for (std::uint64_t p : primes) {
    if (p > m / p) break;
    if (auto e = strip(m, p)) f.push(p, e);
  }
  if (m > 1) {
    if (covered == 0) covered = primes.empty() ? 1 : primes.back();
    if (covered < isqrt(m))
      throw PreconditionError("factorize_with: prime list does not cover sqrt(n)");
    f.push(m, 1);
  }
  return f;
}

DivisorLattice::DivisorLattice(const Factorization& f) : fac_(f) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    strides_[i] = total;
    total *= f[i].exponent + 1;
  }
  values_.assign(total, 1);
  std::size_t block = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::uint64_t p = f[i].prime;
    for (std::uint32_t a = 1; a <= f[i].exponent; ++a) {
      const std::size_t off = a * block;
      for (std::size_t j = 0; j < block; ++j)
        values_[off + j] = values_[off - block + j] * p;
    }
    block *= f[i].exponent + 1;
  }
}

}  // namespace hyplab
