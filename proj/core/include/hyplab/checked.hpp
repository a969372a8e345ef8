#pragma once

#include <cstdint>
#include <string>

#include "hyplab/errors.hpp"

namespace hyplab {

using int128 = __int128;

namespace checked {

[[noreturn]] inline void overflow(const char* op) {
  throw ArithmeticOverflow(std::string("exact integer ") + op +
                           " overflowed 64 bits");
}

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) overflow("addition");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) overflow("subtraction");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) overflow("multiplication");
  return r;
}

inline int128 add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) overflow("128-bit accumulation");
  return r;
}

inline int128 mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) overflow("128-bit multiplication");
  return r;
}

}  // namespace checked

std::string to_string(int128 v);

}  // namespace hyplab
