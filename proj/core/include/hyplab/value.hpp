#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "hyplab/checked.hpp"

namespace hyplab {

/// A scalar produced by the library: either an exact integer (held in 128
/// bits so that window sums of 64-bit values cannot wrap) or a double.
class Value {
 public:
  Value() = default;

  static Value exact(int128 v) { return Value(v); }
  static Value real(double v) { return Value(v); }

  bool is_exact() const noexcept { return std::holds_alternative<int128>(v_); }

  /// Precondition: is_exact().
  int128 exact_value() const { return std::get<int128>(v_); }

  /// Precondition: is_exact() and the value fits in 64 bits.
  std::int64_t as_int64() const;

  double to_double() const noexcept;

  /// Exact + exact stays exact; anything involving a double is a double.
  Value& operator+=(const Value& other);
  Value& operator-=(const Value& other);
  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }

  /// Structural equality: exact values compare exactly, doubles bitwise-equal.
  friend bool operator==(const Value& a, const Value& b) = default;

  /// Integers bare; doubles in shortest round-trip form.
  std::string to_string() const;

 private:
  explicit Value(int128 v) : v_(v) {}
  explicit Value(double v) : v_(v) {}

  std::variant<int128, double> v_{int128{0}};
};

/// Shortest decimal that round-trips to `v` (std::to_chars semantics).
std::string format_double(double v);

/// |a - b| <= tol * max(1, |a|, |b|).
bool nearly_equal(double a, double b, double tol);

/// Exact equality when both are exact, otherwise nearly_equal on doubles.
bool values_agree(const Value& a, const Value& b, double tol);

}  // namespace hyplab
