#include "lexc/ast.hpp"

#include <algorithm>

namespace lexc {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Min: return "min";
    case BinaryOp::Max: return "max";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

const InputDecl* ContractAst::find_input(std::string_view name) const {
  auto it = std::find_if(inputs.begin(), inputs.end(), [&](const auto& i) { return i.name == name; });
  return it == inputs.end() ? nullptr : &*it;
}

const Definition* ContractAst::find_definition(std::string_view name) const {
  auto it = std::find_if(definitions.begin(), definitions.end(),
                         [&](const auto& d) { return d.name == name; });
  return it == definitions.end() ? nullptr : &*it;
}

const EventCatalogDecl* ContractAst::find_catalog(std::string_view name) const {
  auto it = std::find_if(event_catalogs.begin(), event_catalogs.end(),
                         [&](const auto& c) { return c.name == name; });
  return it == event_catalogs.end() ? nullptr : &*it;
}

bool ContractAst::has_party(std::string_view name) const {
  return std::any_of(parties.begin(), parties.end(), [&](const auto& p) { return p.name == name; });
}

namespace {

void collect_names(const Expr& expr, bool with_catalogs, std::vector<std::string>& out) {
  auto add = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NameRef>) {
          add(node.name);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_names(*node.lhs, with_catalogs, out);
          collect_names(*node.rhs, with_catalogs, out);
        } else if constexpr (std::is_same_v<T, Unary>) {
          collect_names(*node.operand, with_catalogs, out);
        } else if constexpr (std::is_same_v<T, Conditional>) {
          collect_names(*node.condition, with_catalogs, out);
          collect_names(*node.then_branch, with_catalogs, out);
          collect_names(*node.else_branch, with_catalogs, out);
        } else if constexpr (std::is_same_v<T, DaysBetween>) {
          collect_names(*node.from, with_catalogs, out);
          collect_names(*node.to, with_catalogs, out);
        } else if constexpr (std::is_same_v<T, Compound>) {
          collect_names(*node.base, with_catalogs, out);
          collect_names(*node.rate, with_catalogs, out);
          collect_names(*node.periods, with_catalogs, out);
        } else if constexpr (std::is_same_v<T, InCatalog>) {
          collect_names(*node.event, with_catalogs, out);
          if (with_catalogs) add(node.catalog);
        }
      },
      expr.node);
}

bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return structurally_equal(*a, *b);
}

bool equal_outcome(const Outcome& a, const Outcome& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.kind);
        if constexpr (std::is_same_v<T, PayOutcome>) {
          return lhs.from == rhs.from && lhs.to == rhs.to && equal_ptr(lhs.amount, rhs.amount);
        } else if constexpr (std::is_same_v<T, Assignment>) {
          return lhs.status == rhs.status && equal_ptr(lhs.value, rhs.value);
        } else if constexpr (std::is_same_v<T, TerminateOutcome>) {
          return lhs.reason == rhs.reason;
        } else {
          return lhs.text == rhs.text;
        }
      },
      a.kind);
}

template <typename T, typename Eq>
bool equal_lists(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> referenced_names(const Expr& expr, bool with_catalogs) {
  std::vector<std::string> out;
  collect_names(expr, with_catalogs, out);
  return out;
}

std::vector<std::string> clause_status_names(const ContractAst& ast) {
  std::vector<std::string> out;
  for (const auto& clause : ast.clauses) {
    for (const auto& outcome : clause.outcomes) {
      if (const auto* set = std::get_if<Assignment>(&outcome.kind)) {
        if (std::find(out.begin(), out.end(), set->status) == out.end()) out.push_back(set->status);
      }
    }
  }
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Literal>) {
          return lhs.value == rhs.value;
        } else if constexpr (std::is_same_v<T, NameRef>) {
          return lhs.name == rhs.name;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return lhs.op == rhs.op && equal_ptr(lhs.lhs, rhs.lhs) && equal_ptr(lhs.rhs, rhs.rhs);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return lhs.op == rhs.op && equal_ptr(lhs.operand, rhs.operand);
        } else if constexpr (std::is_same_v<T, Conditional>) {
          return equal_ptr(lhs.condition, rhs.condition) &&
                 equal_ptr(lhs.then_branch, rhs.then_branch) &&
                 equal_ptr(lhs.else_branch, rhs.else_branch);
        } else if constexpr (std::is_same_v<T, DaysBetween>) {
          return equal_ptr(lhs.from, rhs.from) && equal_ptr(lhs.to, rhs.to);
        } else if constexpr (std::is_same_v<T, Compound>) {
          return equal_ptr(lhs.base, rhs.base) && equal_ptr(lhs.rate, rhs.rate) &&
                 equal_ptr(lhs.periods, rhs.periods);
        } else {
          return lhs.catalog == rhs.catalog && equal_ptr(lhs.event, rhs.event);
        }
      },
      a.node);
}

bool structurally_equal(const ContractAst& a, const ContractAst& b) {
  return a.name == b.name &&
         equal_lists(a.parties, b.parties, [](const auto& x, const auto& y) { return x.name == y.name; }) &&
         equal_lists(a.inputs, b.inputs,
                     [](const auto& x, const auto& y) { return x.name == y.name && x.type == y.type; }) &&
         equal_lists(a.definitions, b.definitions,
                     [](const auto& x, const auto& y) {
                       return x.name == y.name && x.type == y.type && equal_ptr(x.expr, y.expr);
                     }) &&
         equal_lists(a.clauses, b.clauses,
                     [](const auto& x, const auto& y) {
                       return x.name == y.name && equal_ptr(x.guard, y.guard) &&
                              equal_lists(x.outcomes, y.outcomes, equal_outcome);
                     }) &&
         equal_lists(a.event_catalogs, b.event_catalogs,
                     [](const auto& x, const auto& y) {
                       return x.name == y.name && x.listed == y.listed && x.has_wildcard == y.has_wildcard;
                     }) &&
         equal_lists(a.rectify_rules, b.rectify_rules,
                     [](const auto& x, const auto& y) {
                       return x.target == y.target && equal_ptr(x.guard, y.guard) &&
                              equal_lists(x.body, y.body, [](const auto& s, const auto& t) {
                                return s.assignment.status == t.assignment.status &&
                                       equal_ptr(s.assignment.value, t.assignment.value);
                              });
                     }) &&
         equal_lists(a.constraints, b.constraints, [](const auto& x, const auto& y) {
           return x.description == y.description && x.deadline_days == y.deadline_days &&
                  x.overridable_by == y.overridable_by;
         });
}

}  // namespace lexc
