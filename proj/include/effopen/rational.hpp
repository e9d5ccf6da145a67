#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace effopen {

/// Exact rational number in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p/q", "p" or a decimal literal such as "0.25" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Formats as "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

inline Integer numerator_of(const Rational& value) { return boost::multiprecision::numerator(value); }
inline Integer denominator_of(const Rational& value) { return boost::multiprecision::denominator(value); }

/// Least integer strictly greater than x.
Integer floor_plus_one(const Rational& x);

/// Smallest integer >= x.
Integer ceil_of(const Rational& x);

}  // namespace effopen
