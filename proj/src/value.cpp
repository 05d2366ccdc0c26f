#include "lexc/value.hpp"

#include <cstdio>

namespace lexc {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::Money: return "money";
    case ValueType::Number: return "number";
    case ValueType::Percent: return "percent";
    case ValueType::Date: return "date";
    case ValueType::Boolean: return "boolean";
    case ValueType::Text: return "text";
  }
  return "?";
}

std::optional<ValueType> parse_value_type(std::string_view keyword) {
  if (keyword == "money") return ValueType::Money;
  if (keyword == "number") return ValueType::Number;
  if (keyword == "percent") return ValueType::Percent;
  if (keyword == "date") return ValueType::Date;
  if (keyword == "boolean") return ValueType::Boolean;
  if (keyword == "text") return ValueType::Text;
  return std::nullopt;
}

ValueType type_of(const Value& value) {
  return static_cast<ValueType>(value.index());
}

bool is_currency_code(std::string_view code) {
  if (code.size() != 3) return false;
  for (char c : code) {
    if (c < 'A' || c > 'Z') return false;
  }
  return true;
}

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4);
  auto m = digits(5, 2);
  auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{std::chrono::sys_days{ymd}};
}

std::string format_iso_date(const Date& date) {
  const std::chrono::year_month_day ymd{date.day};
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buffer;
}

long long day_count(const Date& from, const Date& to) {
  return (to.day - from.day).count();
}

std::string serialize_money(const Money& money) {
  return money.currency + " " + round_half_up(money.amount, 2);
}

std::string quote_text(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string serialize_value(const Value& value) {
  struct Visitor {
    std::string operator()(const Money& m) const { return serialize_money(m); }
    std::string operator()(const Number& n) const { return to_exact_string(n.value); }
    std::string operator()(const Percent& p) const { return to_exact_string(p.value * 100) + "%"; }
    std::string operator()(const Date& d) const { return format_iso_date(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return quote_text(s); }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace lexc
