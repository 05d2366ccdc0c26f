#include "lexc/parser.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace lexc {

ParseError::ParseError(int line, int column, std::string expected, std::string found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected +
                         ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

DuplicateBindingError::DuplicateBindingError(int line, int column, const std::string& name)
    : ParseError(line, column, "a binding name not used before", "duplicate binding '" + name + "'"),
      name_(name) {}

const Value* Scenario::find(std::string_view name) const {
  auto it = std::find_if(bindings.begin(), bindings.end(), [&](const auto& b) { return b.name == name; });
  return it == bindings.end() ? nullptr : &it->value;
}

Scenario Scenario::without(std::string_view name) const {
  Scenario copy;
  for (const auto& b : bindings) {
    if (b.name != name) copy.bindings.push_back(b);
  }
  return copy;
}

namespace {

using detail::Token;
using detail::TokenKind;

constexpr std::array<std::string_view, 31> kReserved = {
    "contract", "party",   "input", "let",        "clause", "when",   "then",  "events",
    "other",    "rectify", "set",   "constraint", "deadline", "days", "overridable", "by",
    "pay",      "amount",  "terminate", "notice", "and",    "or",     "not",   "if",
    "else",     "true",    "false", "min",        "max",    "compound", "in"};

bool is_reserved(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ContractAst contract() {
    ContractAst ast;
    const Token& first = peek();
    expect_keyword("contract");
    ast.name = expect(TokenKind::String, "contract name string").text;
    expect_symbol("{");
    while (!at_symbol("}")) declaration(ast);
    expect_symbol("}");
    ast.span = span_since(first);
    if (peek().kind != TokenKind::End) fail("end of input");
    return ast;
  }

  Scenario scenario() {
    Scenario result;
    while (peek().kind != TokenKind::End) {
      const Token& name = peek();
      const std::string id = identifier("binding name");
      expect_symbol("=");
      Value value = scenario_literal();
      if (peek().kind != TokenKind::End && peek().span.line == name.span.line) {
        fail("end of line");
      }
      if (result.find(id)) throw DuplicateBindingError(name.span.line, name.span.column, id);
      result.bindings.push_back({id, std::move(value), name.span.line});
    }
    return result;
  }

 private:
  // ---- token helpers ----

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& take() {
    const Token& token = tokens_[pos_];
    if (token.kind != TokenKind::End) ++pos_;
    return token;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& token = peek();
    throw ParseError(token.span.line, token.span.column, expected, detail::describe(token));
  }

  bool at_symbol(std::string_view sym) const {
    return peek().kind == TokenKind::Symbol && peek().text == sym;
  }

  bool at_keyword(std::string_view word) const {
    return peek().kind == TokenKind::Identifier && peek().text == word;
  }

  void expect_symbol(std::string_view sym) {
    if (!at_symbol(sym)) fail("'" + std::string(sym) + "'");
    take();
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) fail("'" + std::string(word) + "'");
    take();
  }

  const Token& expect(TokenKind kind, const std::string& what) {
    if (peek().kind != kind) fail(what);
    return take();
  }

  std::string identifier(const std::string& what) {
    if (peek().kind != TokenKind::Identifier || is_reserved(peek().text)) fail(what);
    return take().text;
  }

  Span span_since(const Token& first) const {
    const Token& last = tokens_[pos_ == 0 ? 0 : pos_ - 1];
    Span span = first.span;
    span.length = last.span.offset + last.span.length - first.span.offset;
    return span;
  }

  ValueType type_keyword() {
    const Token& token = peek();
    if (token.kind == TokenKind::Identifier) {
      if (auto type = parse_value_type(token.text)) {
        take();
        return *type;
      }
    }
    fail("a type (money, number, percent, date, boolean, text)");
  }

  // ---- declarations ----

  void declaration(ContractAst& ast) {
    const Token& first = peek();
    if (at_keyword("party")) {
      take();
      std::string name = identifier("party name");
      expect_symbol(";");
      ast.parties.push_back({std::move(name), span_since(first)});
    } else if (at_keyword("input")) {
      take();
      std::string name = identifier("input name");
      expect_symbol(":");
      ValueType type = type_keyword();
      expect_symbol(";");
      ast.inputs.push_back({std::move(name), type, span_since(first)});
    } else if (at_keyword("let")) {
      take();
      std::string name = identifier("definition name");
      expect_symbol(":");
      ValueType type = type_keyword();
      expect_symbol("=");
      ExprPtr value = expression();
      expect_symbol(";");
      ast.definitions.push_back({std::move(name), type, std::move(value), span_since(first)});
    } else if (at_keyword("clause")) {
      ast.clauses.push_back(clause());
    } else if (at_keyword("events")) {
      ast.event_catalogs.push_back(events());
    } else if (at_keyword("rectify")) {
      ast.rectify_rules.push_back(rectify());
    } else if (at_keyword("constraint")) {
      ast.constraints.push_back(constraint());
    } else {
      fail("a declaration (party, input, let, clause, events, rectify, constraint) or '}'");
    }
  }

  Clause clause() {
    const Token& first = take();
    Clause result;
    result.name = identifier("clause name");
    expect_symbol("{");
    expect_keyword("when");
    result.guard = expression();
    expect_keyword("then");
    do {
      result.outcomes.push_back(outcome());
      expect_symbol(";");
    } while (!at_symbol("}"));
    expect_symbol("}");
    result.span = span_since(first);
    return result;
  }

  Assignment assignment() {
    expect_keyword("set");
    Assignment set;
    set.status = identifier("status name");
    expect_symbol("=");
    set.value = expression();
    return set;
  }

  Outcome outcome() {
    const Token& first = peek();
    Outcome result;
    if (at_keyword("pay")) {
      take();
      PayOutcome pay;
      pay.from = identifier("paying party");
      expect_symbol("->");
      pay.to = identifier("receiving party");
      expect_keyword("amount");
      pay.amount = expression();
      result.kind = std::move(pay);
    } else if (at_keyword("set")) {
      result.kind = assignment();
    } else if (at_keyword("terminate")) {
      take();
      result.kind = TerminateOutcome{expect(TokenKind::String, "termination reason string").text};
    } else if (at_keyword("notice")) {
      take();
      result.kind = NoticeOutcome{expect(TokenKind::String, "notice text string").text};
    } else {
      fail("an outcome (pay, set, terminate, notice)");
    }
    result.span = span_since(first);
    return result;
  }

  EventCatalogDecl events() {
    const Token& first = take();
    EventCatalogDecl catalog;
    catalog.name = identifier("event catalog name");
    expect_symbol("{");
    while (!at_symbol("}")) {
      if (at_keyword("other")) {
        const Token& wildcard = take();
        catalog.has_wildcard = true;
        catalog.wildcard_span = wildcard.span;
      } else {
        catalog.listed.push_back(expect(TokenKind::String, "event name string or 'other'").text);
      }
      expect_symbol(";");
    }
    expect_symbol("}");
    catalog.span = span_since(first);
    return catalog;
  }

  RectifyRule rectify() {
    const Token& first = take();
    RectifyRule rule;
    rule.target = identifier("rectification target");
    expect_keyword("when");
    rule.guard = expression();
    expect_symbol("{");
    while (!at_symbol("}")) {
      const Token& stmt_first = peek();
      Assignment set = assignment();
      expect_symbol(";");
      rule.body.push_back({std::move(set), span_since(stmt_first)});
    }
    expect_symbol("}");
    rule.span = span_since(first);
    return rule;
  }

  Constraint constraint() {
    const Token& first = take();
    Constraint result;
    result.description = expect(TokenKind::String, "constraint description string").text;
    if (at_keyword("deadline")) {
      take();
      const Token& number = expect(TokenKind::Number, "deadline day count");
      std::int64_t days = 0;
      const auto* begin = number.text.data();
      const auto* end = begin + number.text.size();
      auto [ptr, ec] = std::from_chars(begin, end, days);
      if (ec != std::errc() || ptr != end) {
        throw ParseError(number.span.line, number.span.column, "whole number of days", detail::describe(number));
      }
      result.deadline_days = days;
      expect_keyword("days");
    }
    if (at_keyword("overridable")) {
      take();
      expect_keyword("by");
      result.overridable_by = identifier("party name");
    }
    expect_symbol(";");
    result.span = span_since(first);
    return result;
  }

  // ---- expressions ----

  template <typename Node>
  ExprPtr node(Node value, const Token& first) {
    return make_expr(std::move(value), span_since(first));
  }

  ExprPtr expression() {
    const Token& first = peek();
    if (at_keyword("if")) {
      take();
      ExprPtr condition = expression();
      expect_keyword("then");
      ExprPtr then_branch = expression();
      expect_keyword("else");
      ExprPtr else_branch = expression();
      return node(Conditional{std::move(condition), std::move(then_branch), std::move(else_branch)}, first);
    }
    return disjunction();
  }

  ExprPtr disjunction() {
    const Token& first = peek();
    ExprPtr lhs = conjunction();
    while (at_keyword("or")) {
      take();
      lhs = node(Binary{BinaryOp::Or, lhs, conjunction()}, first);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    const Token& first = peek();
    ExprPtr lhs = negation();
    while (at_keyword("and")) {
      take();
      lhs = node(Binary{BinaryOp::And, lhs, negation()}, first);
    }
    return lhs;
  }

  ExprPtr negation() {
    const Token& first = peek();
    if (at_keyword("not")) {
      take();
      return node(Unary{UnaryOp::Not, negation()}, first);
    }
    return comparison();
  }

  ExprPtr comparison() {
    const Token& first = peek();
    ExprPtr lhs = additive();
    static constexpr std::pair<std::string_view, BinaryOp> ops[] = {
        {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},
        {">=", BinaryOp::Ge}, {"=", BinaryOp::Eq}, {"!=", BinaryOp::Ne}};
    for (const auto& [sym, op] : ops) {
      if (at_symbol(sym)) {
        take();
        return node(Binary{op, lhs, additive()}, first);
      }
    }
    if (at_keyword("in")) {
      take();
      std::string catalog = identifier("event catalog name");
      return node(InCatalog{lhs, std::move(catalog)}, first);
    }
    return lhs;
  }

  ExprPtr additive() {
    const Token& first = peek();
    ExprPtr lhs = multiplicative();
    while (at_symbol("+") || at_symbol("-")) {
      const BinaryOp op = take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = node(Binary{op, lhs, multiplicative()}, first);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    const Token& first = peek();
    ExprPtr lhs = unary();
    while (at_symbol("*") || at_symbol("/")) {
      const BinaryOp op = take().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = node(Binary{op, lhs, unary()}, first);
    }
    return lhs;
  }

  ExprPtr unary() {
    const Token& first = peek();
    if (at_symbol("-")) {
      take();
      return node(Unary{UnaryOp::Neg, unary()}, first);
    }
    return primary();
  }

  Rational number_value(const Token& token) {
    try {
      return parse_decimal(token.text);
    } catch (const std::invalid_argument&) {
      throw ParseError(token.span.line, token.span.column, "a well-formed number", detail::describe(token));
    }
  }

  std::optional<Value> literal() {
    const Token& token = peek();
    switch (token.kind) {
      case TokenKind::Number:
        take();
        return Value{Number{number_value(token)}};
      case TokenKind::Percent:
        take();
        return Value{Percent{number_value(token) / 100}};
      case TokenKind::Date: {
        auto date = parse_iso_date(token.text);
        if (!date) {
          throw ParseError(token.span.line, token.span.column, "a valid calendar date", detail::describe(token));
        }
        take();
        return Value{*date};
      }
      case TokenKind::String:
        take();
        return Value{token.text};
      case TokenKind::Identifier:
        if (token.text == "true" || token.text == "false") {
          take();
          return Value{token.text == "true"};
        }
        if (is_currency_code(token.text) && peek(1).kind == TokenKind::Number) {
          take();
          return Value{Money{token.text, number_value(take())}};
        }
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  std::vector<ExprPtr> call_arguments(std::size_t count) {
    expect_symbol("(");
    std::vector<ExprPtr> args;
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0) expect_symbol(",");
      args.push_back(expression());
    }
    expect_symbol(")");
    return args;
  }

  ExprPtr primary() {
    const Token& first = peek();
    if (auto value = literal()) return node(Literal{std::move(*value)}, first);
    if (at_symbol("(")) {
      take();
      ExprPtr inner = expression();
      expect_symbol(")");
      return inner;
    }
    if (first.kind == TokenKind::Identifier) {
      if (first.text == "min" || first.text == "max") {
        const BinaryOp op = first.text == "min" ? BinaryOp::Min : BinaryOp::Max;
        take();
        auto args = call_arguments(2);
        return node(Binary{op, args[0], args[1]}, first);
      }
      if (first.text == "days") {
        take();
        auto args = call_arguments(2);
        return node(DaysBetween{args[0], args[1]}, first);
      }
      if (first.text == "compound") {
        take();
        auto args = call_arguments(3);
        return node(Compound{args[0], args[1], args[2]}, first);
      }
      if (!is_reserved(first.text)) {
        take();
        return node(NameRef{first.text}, first);
      }
    }
    fail("an expression");
  }

  Value scenario_literal() {
    const Token& first = peek();
    const bool negative = at_symbol("-");
    if (negative) take();
    std::optional<Value> value;
    if (!negative || peek().kind == TokenKind::Number || peek().kind == TokenKind::Percent) value = literal();
    if (!value) fail("a literal value");
    if (negative) {
      if (auto* n = std::get_if<Number>(&*value)) {
        n->value = -n->value;
      } else if (auto* p = std::get_if<Percent>(&*value)) {
        p->value = -p->value;
      }
    } else if (auto* m = std::get_if<Money>(&*value); m && at_symbol("-")) {
      throw ParseError(first.span.line, first.span.column, "a literal value", "malformed money");
    }
    return *value;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ContractAst parse(std::string_view text) { return Parser(detail::tokenize(text)).contract(); }

ParsedContract parse_and_validate(std::string_view text) {
  ParsedContract result{parse(text), {}};
  result.errors = validate(result.ast);
  return result;
}

Scenario parse_scenario(std::string_view text) { return Parser(detail::tokenize(text)).scenario(); }

std::string serialize_scenario(const Scenario& scenario) {
  std::string out;
  for (const auto& binding : scenario.bindings) {
    out += binding.name + " = ";
    if (const auto* money = std::get_if<Money>(&binding.value)) {
      out += money->currency + " " + to_exact_string(money->amount);
    } else {
      out += serialize_value(binding.value);
    }
    out += '\n';
  }
  return out;
}

}  // namespace lexc
