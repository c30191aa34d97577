#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sqrtgreen {

// Exact nonnegative fraction. Arrival rates and slack coefficients are kept
// exact so that lambda * c is integral whenever the cycle length makes it so.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  // Accepts "a/b", an integer, or a plain decimal such as "0.125".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // floor(value * k) and the remaining fractional part, computed exactly.
  std::int64_t floor_times(std::int64_t k) const;
  Rational frac_times(std::int64_t k) const;

  // "a/b", or "a" when the denominator is 1.
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sqrtgreen
