#include "effopen/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace effopen {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  }
  std::string digits(s);
  if (digits[0] == '+') digits.erase(0, 1);
  return Integer(digits);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
      throw std::invalid_argument("sign not allowed in denominator of '" + std::string(text) + "'");
    }
    Integer den = parse_integer(den_text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    Integer int_part = whole.empty() ? Integer(0) : parse_integer(whole);
    Integer frac_part = frac.empty() ? Integer(0) : parse_integer(frac);
    if (!frac.empty() && !std::isdigit(static_cast<unsigned char>(frac[0]))) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    Rational value = Rational(int_part) + Rational(frac_part, scale);
    return negative ? -value : value;
  }

  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& value) {
  const Integer den = denominator_of(value);
  if (den == 1) return numerator_of(value).str();
  return numerator_of(value).str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Integer floor_plus_one(const Rational& x) {
  // floor(x) + 1 is the least integer strictly greater than x.
  Integer n = numerator_of(x);
  Integer d = denominator_of(x);
  Integer q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q + 1;
}

Integer ceil_of(const Rational& x) {
  Integer n = numerator_of(x);
  Integer d = denominator_of(x);
  Integer q = n / d;
  if (n > 0 && q * d != n) q += 1;
  return q;
}

}  // namespace effopen
