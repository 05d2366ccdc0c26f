#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace lexc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses an unsigned decimal literal such as "26_640_000.00" or "0.1946".
// Underscores are digit separators. Throws std::invalid_argument.
Rational parse_decimal(std::string_view text);

Integer floor_of(const Rational& value);

Rational power(const Rational& base, unsigned long exponent);

// Exact decimal expansion ("0.001946", "-12.5", "7"), or nullopt when the
// reduced denominator has a prime factor other than 2 or 5.
std::optional<std::string> exact_decimal(const Rational& value);

// exact_decimal when it exists, otherwise "p/q".
std::string to_exact_string(const Rational& value);

// Fixed-point rendering with `places` digits, ties rounded away from zero.
std::string round_half_up(const Rational& value, int places);

}  // namespace lexc
