#pragma once

#include "lexc/rational.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace lexc {

enum class ValueType { Money, Number, Percent, Date, Boolean, Text };

std::string_view to_string(ValueType type);
std::optional<ValueType> parse_value_type(std::string_view keyword);

struct Money {
  std::string currency;  // ISO-4217, three uppercase letters
  Rational amount;       // major units, exact

  friend bool operator==(const Money&, const Money&) = default;
};

struct Number {
  Rational value;

  friend bool operator==(const Number&, const Number&) = default;
};

// Stored as a fraction: 7% is 7/100.
struct Percent {
  Rational value;

  friend bool operator==(const Percent&, const Percent&) = default;
};

struct Date {
  std::chrono::sys_days day;

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

using Value = std::variant<Money, Number, Percent, Date, bool, std::string>;

ValueType type_of(const Value& value);

bool is_currency_code(std::string_view code);

// Proleptic Gregorian ISO-8601 "YYYY-MM-DD"; nullopt if malformed or invalid.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

// Exact calendar-day difference to - from.
long long day_count(const Date& from, const Date& to);

// "GBP 143.75": two places, ties away from zero, no thousands separators.
std::string serialize_money(const Money& money);

std::string quote_text(std::string_view text);

// Machine rendering used by ledgers and scenario files. Money goes through
// serialize_money; numbers and percents are exact.
std::string serialize_value(const Value& value);

}  // namespace lexc
