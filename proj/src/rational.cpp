#include "lexc/rational.hpp"

#include <stdexcept>

namespace lexc {

Rational parse_decimal(std::string_view text) {
  Integer numerator = 0;
  Integer denominator = 1;
  bool seen_digit = false;
  bool seen_point = false;
  bool last_was_digit = false;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      numerator = numerator * 10 + (c - '0');
      if (seen_point) denominator *= 10;
      seen_digit = true;
      last_was_digit = true;
    } else if (c == '_') {
      if (!last_was_digit) throw std::invalid_argument("misplaced digit separator");
      last_was_digit = false;
    } else if (c == '.') {
      if (seen_point || !last_was_digit) throw std::invalid_argument("malformed decimal point");
      seen_point = true;
      last_was_digit = false;
    } else {
      throw std::invalid_argument(std::string("unexpected character '") + c + "' in number");
    }
  }
  if (!seen_digit || !last_was_digit) throw std::invalid_argument("malformed number");
  return Rational(numerator, denominator);
}

Integer floor_of(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  Integer q = num / den;  // truncates toward zero
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

Rational power(const Rational& base, unsigned long exponent) {
  Rational result = 1;
  Rational factor = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= factor;
    exponent >>= 1u;
    if (exponent > 0) factor *= factor;
  }
  return result;
}

std::optional<std::string> exact_decimal(const Rational& value) {
  Integer num = boost::multiprecision::numerator(value);
  Integer den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;

  // den = 2^a * 5^b is required for a terminating expansion.
  Integer rest = den;
  unsigned twos = 0;
  unsigned fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return std::nullopt;

  const unsigned places = std::max(twos, fives);
  Integer scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const Integer scaled = num * (scale / den);

  std::string digits = scaled.str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, 1, '.');
  }
  if (negative) digits.insert(0, 1, '-');
  return digits;
}

std::string to_exact_string(const Rational& value) {
  if (auto decimal = exact_decimal(value)) return *decimal;
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

std::string round_half_up(const Rational& value, int places) {
  Integer scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  const Integer rounded = floor_of(magnitude * scale + Rational(1, 2));

  std::string digits = rounded.str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, places - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - places, 1, '.');
  }
  if (negative && rounded != 0) digits.insert(0, 1, '-');
  return digits;
}

}  // namespace lexc
