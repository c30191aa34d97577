#include "sqrtgreen/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace sqrtgreen {

namespace {

__extension__ typedef __int128 i128;

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("rational denominator must be positive");
  if (num < 0) throw std::invalid_argument("rational must be nonnegative");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (whole < 0 || frac < 0) throw std::invalid_argument("rational must be nonnegative");
    return Rational(whole * den + frac, den);
  }
  return Rational(parse_int(text, text), 1);
}

std::int64_t Rational::floor_times(std::int64_t k) const {
  return static_cast<std::int64_t>((static_cast<i128>(num_) * k) / den_);
}

Rational Rational::frac_times(std::int64_t k) const {
  return Rational(static_cast<std::int64_t>((static_cast<i128>(num_) * k) % den_), den_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const auto lhs = static_cast<i128>(a.num_) * b.den_;
  const auto rhs = static_cast<i128>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace sqrtgreen
