#include "lexc/evaluator.hpp"

#include "lexc/printer.hpp"
#include "lexc/validate.hpp"

#include <algorithm>

namespace lexc {

std::string_view to_string(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::UnboundInput: return "UnboundInput";
    case EvalErrorKind::DivisionByZero: return "DivisionByZero";
    case EvalErrorKind::CyclicDefinition: return "CyclicDefinition";
    case EvalErrorKind::CurrencyMismatch: return "CurrencyMismatch";
    case EvalErrorKind::StatusConflict: return "StatusConflict";
    case EvalErrorKind::NegativeDayCount: return "NegativeDayCount";
    case EvalErrorKind::BindingMismatch: return "BindingMismatch";
  }
  return "?";
}

EvalError::EvalError(EvalErrorKind kind, std::string detail, Span span)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)),
      span_(span) {}

std::string format_error(const EvalError& error) {
  return "ERROR " + std::string(to_string(error.kind())) + " " + error.detail();
}

namespace {

// Numeric view of a money, number or percent value.
struct Quantity {
  ValueType type;
  std::string currency;
  Rational amount;
};

Quantity quantity(const Value& value) {
  if (const auto* m = std::get_if<Money>(&value)) return {ValueType::Money, m->currency, m->amount};
  if (const auto* n = std::get_if<Number>(&value)) return {ValueType::Number, {}, n->value};
  if (const auto* p = std::get_if<Percent>(&value)) return {ValueType::Percent, {}, p->value};
  throw std::logic_error("non-numeric operand " + std::string(to_string(type_of(value))));
}

Value make_quantity(ValueType type, const std::string& currency, Rational amount) {
  switch (type) {
    case ValueType::Money: return Money{currency, std::move(amount)};
    case ValueType::Percent: return Percent{std::move(amount)};
    default: return Number{std::move(amount)};
  }
}

bool as_bool(const Value& value) {
  if (const auto* b = std::get_if<bool>(&value)) return *b;
  throw std::logic_error("non-boolean operand");
}

class Evaluator {
 public:
  explicit Evaluator(const Environment& env) : env_(env) {}

  Value eval(const Expr& expr) const {
    return std::visit([&](const auto& node) { return this->on(node, expr.span); }, expr.node);
  }

 private:
  Value on(const Literal& lit, const Span&) const { return lit.value; }

  Value on(const NameRef& ref, const Span& span) const {
    auto it = env_.values.find(ref.name);
    if (it == env_.values.end()) throw EvalError(EvalErrorKind::UnboundInput, ref.name, span);
    return it->second;
  }

  Value on(const Unary& u, const Span&) const {
    Value operand = eval(*u.operand);
    if (u.op == UnaryOp::Not) return !as_bool(operand);
    Quantity q = quantity(operand);
    return make_quantity(q.type, q.currency, -q.amount);
  }

  Value on(const Conditional& c, const Span&) const {
    return as_bool(eval(*c.condition)) ? eval(*c.then_branch) : eval(*c.else_branch);
  }

  Value on(const DaysBetween& d, const Span&) const {
    const Value from = eval(*d.from);
    const Value to = eval(*d.to);
    return Number{Rational(day_count(std::get<Date>(from), std::get<Date>(to)))};
  }

  Value on(const Compound& c, const Span& span) const {
    Quantity base = quantity(eval(*c.base));
    Quantity rate = quantity(eval(*c.rate));
    Quantity periods = quantity(eval(*c.periods));
    Integer n = floor_of(periods.amount);
    if (n < 0) {
      throw EvalError(EvalErrorKind::NegativeDayCount, "compound periods " + to_exact_string(periods.amount), span);
    }
    Rational factor = power(1 + rate.amount, n.convert_to<unsigned long>());
    return make_quantity(base.type, base.currency, base.amount * factor);
  }

  Value on(const InCatalog& in, const Span&) const {
    const std::string event = std::get<std::string>(eval(*in.event));
    auto it = env_.catalogs.find(in.catalog);
    if (it == env_.catalogs.end()) throw std::logic_error("unknown catalog " + in.catalog);
    const auto& listed = it->second.listed;
    return it->second.has_wildcard || std::find(listed.begin(), listed.end(), event) != listed.end();
  }

  Value on(const Binary& b, const Span& span) const {
    if (b.op == BinaryOp::And) return as_bool(eval(*b.lhs)) && as_bool(eval(*b.rhs));
    if (b.op == BinaryOp::Or) return as_bool(eval(*b.lhs)) || as_bool(eval(*b.rhs));

    const Value lhs = eval(*b.lhs);
    const Value rhs = eval(*b.rhs);
    switch (b.op) {
      case BinaryOp::Eq: return equal(lhs, rhs, span);
      case BinaryOp::Ne: return !equal(lhs, rhs, span);
      case BinaryOp::Lt: return compare(lhs, rhs, span) < 0;
      case BinaryOp::Le: return compare(lhs, rhs, span) <= 0;
      case BinaryOp::Gt: return compare(lhs, rhs, span) > 0;
      case BinaryOp::Ge: return compare(lhs, rhs, span) >= 0;
      default: break;
    }
    return arithmetic(b.op, quantity(lhs), quantity(rhs), span);
  }

  static void same_currency(const Quantity& a, const Quantity& b, const Span& span) {
    if (a.type == ValueType::Money && b.type == ValueType::Money && a.currency != b.currency) {
      throw EvalError(EvalErrorKind::CurrencyMismatch, a.currency + " vs " + b.currency, span);
    }
  }

  static bool equal(const Value& a, const Value& b, const Span& span) {
    if (std::holds_alternative<Money>(a) && std::holds_alternative<Money>(b)) {
      same_currency(quantity(a), quantity(b), span);
    }
    return a == b;
  }

  static int compare(const Value& a, const Value& b, const Span& span) {
    if (const auto* da = std::get_if<Date>(&a)) {
      const Date& db = std::get<Date>(b);
      return *da < db ? -1 : (db < *da ? 1 : 0);
    }
    Quantity qa = quantity(a);
    Quantity qb = quantity(b);
    same_currency(qa, qb, span);
    return qa.amount < qb.amount ? -1 : (qb.amount < qa.amount ? 1 : 0);
  }

  static Value arithmetic(BinaryOp op, const Quantity& a, const Quantity& b, const Span& span) {
    switch (op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Min:
      case BinaryOp::Max: {
        same_currency(a, b, span);
        Rational r = op == BinaryOp::Add   ? a.amount + b.amount
                     : op == BinaryOp::Sub ? a.amount - b.amount
                     : op == BinaryOp::Min ? std::min(a.amount, b.amount)
                                           : std::max(a.amount, b.amount);
        return make_quantity(a.type, a.currency, std::move(r));
      }
      case BinaryOp::Mul: {
        if (a.type == ValueType::Money) return make_quantity(ValueType::Money, a.currency, a.amount * b.amount);
        if (b.type == ValueType::Money) return make_quantity(ValueType::Money, b.currency, a.amount * b.amount);
        const bool percent = a.type == ValueType::Percent || b.type == ValueType::Percent;
        return make_quantity(percent ? ValueType::Percent : ValueType::Number, {}, a.amount * b.amount);
      }
      case BinaryOp::Div: {
        if (b.amount == 0) throw EvalError(EvalErrorKind::DivisionByZero, "divisor evaluated to 0", span);
        Rational r = a.amount / b.amount;
        if (a.type == ValueType::Money && b.type != ValueType::Money) {
          return make_quantity(ValueType::Money, a.currency, std::move(r));
        }
        if (a.type == ValueType::Percent && b.type == ValueType::Number) {
          return make_quantity(ValueType::Percent, {}, std::move(r));
        }
        same_currency(a, b, span);
        return make_quantity(ValueType::Number, {}, std::move(r));
      }
      default: break;
    }
    throw std::logic_error("unhandled operator");
  }

  const Environment& env_;
};

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void bind_inputs(const ContractAst& ast, const Scenario& scenario, Environment& env) {
  for (const auto& binding : scenario.bindings) {
    const InputDecl* input = ast.find_input(binding.name);
    if (!input) throw EvalError(EvalErrorKind::BindingMismatch, binding.name + " is not a declared input");
    if (type_of(binding.value) != input->type) {
      throw EvalError(EvalErrorKind::BindingMismatch,
                      binding.name + " expects " + std::string(to_string(input->type)) + ", got " +
                          std::string(to_string(type_of(binding.value))),
                      input->span);
    }
    env.values[binding.name] = binding.value;
  }
  for (const auto& input : ast.inputs) {
    if (!env.values.count(input.name)) throw EvalError(EvalErrorKind::UnboundInput, input.name, input.span);
  }
}

}  // namespace

Value eval_expr(const Expr& expr, const Environment& env) { return Evaluator(env).eval(expr); }

RectificationResult apply_rectification(StatusStore store, const std::vector<RectifyRule>& rules, int max_passes) {
  if (max_passes < 1) throw std::invalid_argument("max_passes must be at least 1");
  Environment env;
  env.values = std::move(store);
  int firing_passes = 0;
  for (;;) {
    bool fired = false;
    for (const auto& rule : rules) {
      if (!as_bool(eval_expr(*rule.guard, env))) continue;
      fired = true;
      for (const auto& stmt : rule.body) {
        env.values[stmt.assignment.status] = eval_expr(*stmt.assignment.value, env);
      }
    }
    if (!fired) break;
    if (++firing_passes > max_passes) {
      throw EvalError(EvalErrorKind::StatusConflict,
                      "rectification did not converge after " + std::to_string(max_passes) + " passes",
                      rules.front().span);
    }
  }
  return {std::move(env.values), std::max(firing_passes, 1)};
}

OutcomeLedger run(const ContractAst& ast, const Scenario& scenario, const RunOptions& options) {
  Environment env;
  for (const auto& catalog : ast.event_catalogs) env.catalogs.emplace(catalog.name, catalog);
  bind_inputs(ast, scenario, env);

  DependencyGraph graph(ast);
  auto order = graph.topological_order();
  if (!order) {
    const auto cycles = graph.cycles();
    throw EvalError(EvalErrorKind::CyclicDefinition, cycles.empty() ? "" : join(cycles.front()));
  }
  for (const auto& name : *order) {
    if (const Definition* def = ast.find_definition(name)) env.values[name] = eval_expr(*def->expr, env);
  }

  OutcomeLedger ledger;
  StatusStore statuses;
  for (const auto& clause : ast.clauses) {
    if (!as_bool(eval_expr(*clause.guard, env))) continue;
    ledger.fired_clauses.push_back(clause.name);
    for (const auto& outcome : clause.outcomes) {
      if (const auto* pay = std::get_if<PayOutcome>(&outcome.kind)) {
        ledger.entries.push_back(PaymentEntry{pay->from, pay->to, std::get<Money>(eval_expr(*pay->amount, env))});
      } else if (const auto* set = std::get_if<Assignment>(&outcome.kind)) {
        Value value = eval_expr(*set->value, env);
        auto [it, inserted] = statuses.emplace(set->status, value);
        if (inserted) {
          ledger.entries.push_back(StatusEntry{set->status, std::move(value)});
        } else if (!(it->second == value)) {
          throw EvalError(EvalErrorKind::StatusConflict,
                          set->status + " already " + serialize_value(it->second) + ", clause " + clause.name +
                              " sets " + serialize_value(value),
                          outcome.span);
        }
      } else if (const auto* term = std::get_if<TerminateOutcome>(&outcome.kind)) {
        ledger.entries.push_back(TerminationEntry{term->reason});
      } else {
        ledger.entries.push_back(NoticeEntry{std::get<NoticeOutcome>(outcome.kind).text});
      }
    }
  }

  if (!ast.rectify_rules.empty()) {
    auto result = apply_rectification(statuses, ast.rectify_rules, options.max_passes);
    ledger.rectification_passes = result.passes;
    for (auto& entry : ledger.entries) {
      if (auto* status = std::get_if<StatusEntry>(&entry)) {
        status->value = result.store.at(status->name);
        result.store.erase(status->name);
      }
    }
    // statuses first set by rectification go last, in name order
    for (auto& [name, value] : result.store) ledger.entries.push_back(StatusEntry{name, std::move(value)});
  }
  return ledger;
}

}  // namespace lexc
