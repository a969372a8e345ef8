#include "hyplab/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace hyplab {

std::string to_string(int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  // Work with negative magnitudes so INT128_MIN is representable.
  std::string digits;
  int128 t = negative ? v : -v;
  while (t != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(t % 10)));
    t /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::int64_t Value::as_int64() const {
  const int128 v = exact_value();
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    checked::overflow("narrowing to 64 bits");
  return static_cast<std::int64_t>(v);
}

double Value::to_double() const noexcept {
  if (const auto* i = std::get_if<int128>(&v_)) return static_cast<double>(*i);
  return std::get<double>(v_);
}

Value& Value::operator+=(const Value& other) {
  if (is_exact() && other.is_exact())
    v_ = checked::add(exact_value(), other.exact_value());
  else
    v_ = to_double() + other.to_double();
  return *this;
}

Value& Value::operator-=(const Value& other) {
  if (is_exact() && other.is_exact())
    v_ = checked::add(exact_value(), -other.exact_value());
  else
    v_ = to_double() - other.to_double();
  return *this;
}

std::string Value::to_string() const {
  if (is_exact()) return hyplab::to_string(exact_value());
  return format_double(std::get<double>(v_));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

bool nearly_equal(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

bool values_agree(const Value& a, const Value& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a.exact_value() == b.exact_value();
  return nearly_equal(a.to_double(), b.to_double(), tol);
}

}  // namespace hyplab
