#include "lexc/printer.hpp"

#include <sstream>

namespace lexc {

namespace {

constexpr int kConditional = 0;
constexpr int kOr = 1;
constexpr int kAnd = 2;
constexpr int kNot = 3;
constexpr int kCompare = 4;
constexpr int kAdditive = 5;
constexpr int kMultiplicative = 6;
constexpr int kNegation = 7;
constexpr int kPrimary = 8;

int precedence(const Expr& expr) {
  if (const auto* bin = std::get_if<Binary>(&expr.node)) {
    switch (bin->op) {
      case BinaryOp::Or: return kOr;
      case BinaryOp::And: return kAnd;
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
      case BinaryOp::Eq:
      case BinaryOp::Ne: return kCompare;
      case BinaryOp::Add:
      case BinaryOp::Sub: return kAdditive;
      case BinaryOp::Mul:
      case BinaryOp::Div: return kMultiplicative;
      case BinaryOp::Min:
      case BinaryOp::Max: return kPrimary;
    }
  }
  if (const auto* un = std::get_if<Unary>(&expr.node)) return un->op == UnaryOp::Not ? kNot : kNegation;
  if (std::holds_alternative<Conditional>(expr.node)) return kConditional;
  if (std::holds_alternative<InCatalog>(expr.node)) return kCompare;
  return kPrimary;
}

std::string number_text(const Rational& value) {
  if (auto decimal = exact_decimal(value)) return *decimal;
  // Parsed literals always terminate; constructed ones may not.
  return "(" + boost::multiprecision::numerator(value).str() + " / " +
         boost::multiprecision::denominator(value).str() + ")";
}

void print(const Expr& expr, std::ostream& out);

void print_operand(const Expr& expr, int min_level, std::ostream& out) {
  if (precedence(expr) < min_level) {
    out << '(';
    print(expr, out);
    out << ')';
  } else {
    print(expr, out);
  }
}

void print(const Expr& expr, std::ostream& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Literal>) {
          out << print_literal(node.value);
        } else if constexpr (std::is_same_v<T, NameRef>) {
          out << node.name;
        } else if constexpr (std::is_same_v<T, Binary>) {
          if (node.op == BinaryOp::Min || node.op == BinaryOp::Max) {
            out << to_string(node.op) << '(';
            print(*node.lhs, out);
            out << ", ";
            print(*node.rhs, out);
            out << ')';
            return;
          }
          const int level = precedence(expr);
          // Comparisons do not chain; the others associate to the left.
          print_operand(*node.lhs, level == kCompare ? level + 1 : level, out);
          out << ' ' << to_string(node.op) << ' ';
          print_operand(*node.rhs, level + 1, out);
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (node.op == UnaryOp::Not) {
            out << "not ";
            print_operand(*node.operand, kNot, out);
          } else {
            out << '-';
            print_operand(*node.operand, kNegation, out);
          }
        } else if constexpr (std::is_same_v<T, Conditional>) {
          out << "if ";
          print(*node.condition, out);
          out << " then ";
          print(*node.then_branch, out);
          out << " else ";
          print(*node.else_branch, out);
        } else if constexpr (std::is_same_v<T, DaysBetween>) {
          out << "days(";
          print(*node.from, out);
          out << ", ";
          print(*node.to, out);
          out << ')';
        } else if constexpr (std::is_same_v<T, Compound>) {
          out << "compound(";
          print(*node.base, out);
          out << ", ";
          print(*node.rate, out);
          out << ", ";
          print(*node.periods, out);
          out << ')';
        } else if constexpr (std::is_same_v<T, InCatalog>) {
          print_operand(*node.event, kCompare + 1, out);
          out << " in " << node.catalog;
        }
      },
      expr.node);
}

void print_assignment(const Assignment& set, std::ostream& out) {
  out << "set " << set.status << " = ";
  print(*set.value, out);
}

}  // namespace

std::string print_literal(const Value& value) {
  struct Visitor {
    std::string operator()(const Money& m) const { return m.currency + " " + number_text(m.amount); }
    std::string operator()(const Number& n) const { return number_text(n.value); }
    std::string operator()(const Percent& p) const { return number_text(p.value * 100) + "%"; }
    std::string operator()(const Date& d) const { return format_iso_date(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return quote_text(s); }
  };
  return std::visit(Visitor{}, value);
}

std::string print_expr(const Expr& expr) {
  std::ostringstream out;
  print(expr, out);
  return out.str();
}

std::string print_canonical(const ContractAst& ast) {
  std::ostringstream out;
  out << "contract " << quote_text(ast.name) << " {";
  const bool empty = ast.parties.empty() && ast.inputs.empty() && ast.definitions.empty() &&
                     ast.clauses.empty() && ast.event_catalogs.empty() && ast.rectify_rules.empty() &&
                     ast.constraints.empty();
  if (empty) {
    out << " }\n";
    return out.str();
  }
  out << '\n';
  for (const auto& party : ast.parties) out << "  party " << party.name << ";\n";
  for (const auto& input : ast.inputs) out << "  input " << input.name << ": " << to_string(input.type) << ";\n";
  for (const auto& def : ast.definitions) {
    out << "  let " << def.name << ": " << to_string(def.type) << " = ";
    print(*def.expr, out);
    out << ";\n";
  }
  for (const auto& catalog : ast.event_catalogs) {
    out << "  events " << catalog.name << " {";
    for (const auto& event : catalog.listed) out << ' ' << quote_text(event) << ';';
    if (catalog.has_wildcard) out << " other;";
    out << " }\n";
  }
  for (const auto& clause : ast.clauses) {
    out << "  clause " << clause.name << " {\n    when ";
    print(*clause.guard, out);
    out << " then\n";
    for (const auto& outcome : clause.outcomes) {
      out << "      ";
      std::visit(
          [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, PayOutcome>) {
              out << "pay " << o.from << " -> " << o.to << " amount ";
              print(*o.amount, out);
            } else if constexpr (std::is_same_v<T, Assignment>) {
              print_assignment(o, out);
            } else if constexpr (std::is_same_v<T, TerminateOutcome>) {
              out << "terminate " << quote_text(o.reason);
            } else {
              out << "notice " << quote_text(o.text);
            }
          },
          outcome.kind);
      out << ";\n";
    }
    out << "  }\n";
  }
  for (const auto& rule : ast.rectify_rules) {
    out << "  rectify " << rule.target << " when ";
    print(*rule.guard, out);
    out << " {";
    for (const auto& stmt : rule.body) {
      out << ' ';
      print_assignment(stmt.assignment, out);
      out << ';';
    }
    out << " }\n";
  }
  for (const auto& constraint : ast.constraints) {
    out << "  constraint " << quote_text(constraint.description);
    if (constraint.deadline_days) out << " deadline " << *constraint.deadline_days << " days";
    if (constraint.overridable_by) out << " overridable by " << *constraint.overridable_by;
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace lexc
