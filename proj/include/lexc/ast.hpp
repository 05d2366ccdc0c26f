#pragma once

#include "lexc/value.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace lexc {

// Byte range into the source text plus the 1-based position of its start.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  int line = 0;
  int column = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class BinaryOp { Add, Sub, Mul, Div, Min, Max, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Not, Neg };

std::string_view to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  Value value;
};

struct NameRef {
  std::string name;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Conditional {
  ExprPtr condition;
  ExprPtr then_branch;
  ExprPtr else_branch;
};

// days(from, to): whole calendar days to - from.
struct DaysBetween {
  ExprPtr from;
  ExprPtr to;
};

// compound(base, rate, periods) = base * (1 + rate)^floor(periods).
struct Compound {
  ExprPtr base;
  ExprPtr rate;
  ExprPtr periods;
};

// `event in catalog`: membership in a declared event catalog.
struct InCatalog {
  ExprPtr event;
  std::string catalog;
};

struct Expr {
  std::variant<Literal, NameRef, Binary, Unary, Conditional, DaysBetween, Compound, InCatalog> node;
  Span span;
};

template <typename Node>
ExprPtr make_expr(Node node, Span span = {}) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}

struct Party {
  std::string name;
  Span span;
};

struct InputDecl {
  std::string name;
  ValueType type;
  Span span;
};

struct Definition {
  std::string name;
  ValueType type;
  ExprPtr expr;
  Span span;
};

struct Assignment {
  std::string status;
  ExprPtr value;
};

struct PayOutcome {
  std::string from;
  std::string to;
  ExprPtr amount;
};

struct TerminateOutcome {
  std::string reason;
};

struct NoticeOutcome {
  std::string text;
};

struct Outcome {
  std::variant<PayOutcome, Assignment, TerminateOutcome, NoticeOutcome> kind;
  Span span;
};

struct Clause {
  std::string name;
  ExprPtr guard;
  std::vector<Outcome> outcomes;
  Span span;
};

struct EventCatalogDecl {
  std::string name;
  std::vector<std::string> listed;
  bool has_wildcard = false;
  Span span;
  Span wildcard_span;
};

struct SetStatement {
  Assignment assignment;
  Span span;
};

struct RectifyRule {
  std::string target;
  ExprPtr guard;
  std::vector<SetStatement> body;
  Span span;
};

struct Constraint {
  std::string description;
  std::optional<std::int64_t> deadline_days;
  std::optional<std::string> overridable_by;
  Span span;
};

struct ContractAst {
  std::string name;
  std::vector<Party> parties;
  std::vector<InputDecl> inputs;
  std::vector<Definition> definitions;
  std::vector<Clause> clauses;
  std::vector<EventCatalogDecl> event_catalogs;
  std::vector<RectifyRule> rectify_rules;
  std::vector<Constraint> constraints;
  Span span;

  const InputDecl* find_input(std::string_view name) const;
  const Definition* find_definition(std::string_view name) const;
  const EventCatalogDecl* find_catalog(std::string_view name) const;
  bool has_party(std::string_view name) const;
};

// Names read by an expression, in first-occurrence order. Catalog names used
// by `in` are included only when with_catalogs is set.
std::vector<std::string> referenced_names(const Expr& expr, bool with_catalogs = false);

// Status names assigned anywhere by clause outcomes, in source order.
std::vector<std::string> clause_status_names(const ContractAst& ast);

// Structural equality; spans are ignored.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const ContractAst& a, const ContractAst& b);

}  // namespace lexc
