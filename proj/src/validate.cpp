#include "lexc/validate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace lexc {

std::string_view to_string(StructuralErrorKind kind) {
  switch (kind) {
    case StructuralErrorKind::DuplicateName: return "DuplicateName";
    case StructuralErrorKind::UnresolvedName: return "UnresolvedName";
    case StructuralErrorKind::UndeclaredParty: return "UndeclaredParty";
    case StructuralErrorKind::TypeMismatch: return "TypeMismatch";
    case StructuralErrorKind::CurrencyMismatch: return "CurrencyMismatch";
    case StructuralErrorKind::InvalidConstraint: return "InvalidConstraint";
  }
  return "?";
}

std::map<std::string, ValueType> status_types(const ContractAst& ast);

namespace {

bool is_numeric(ValueType t) {
  return t == ValueType::Money || t == ValueType::Number || t == ValueType::Percent;
}

std::string type_name(const StaticType& t) {
  std::string name(to_string(t.type));
  if (t.currency) name += " (" + *t.currency + ")";
  return name;
}

// What an expression may refer to in a given position.
struct Scope {
  std::map<std::string, ValueType> names;
  std::set<std::string> parties;
  std::set<std::string> catalogs;
  std::string unresolved_hint;
};

class Checker {
 public:
  explicit Checker(std::vector<StructuralError>& errors) : errors_(errors) {}

  std::optional<StaticType> infer(const Expr& expr, const Scope& scope) {
    return std::visit([&](const auto& node) { return infer_node(node, expr.span, scope); }, expr.node);
  }

  void error(StructuralErrorKind kind, std::string message, Span span) {
    errors_.push_back({kind, std::move(message), span});
  }

 private:
  std::optional<StaticType> infer_node(const Literal& lit, Span, const Scope&) {
    StaticType t{type_of(lit.value), std::nullopt};
    if (const auto* money = std::get_if<Money>(&lit.value)) t.currency = money->currency;
    return t;
  }

  std::optional<StaticType> infer_node(const NameRef& ref, Span span, const Scope& scope) {
    if (auto it = scope.names.find(ref.name); it != scope.names.end()) {
      return StaticType{it->second, std::nullopt};
    }
    if (scope.parties.count(ref.name)) {
      error(StructuralErrorKind::TypeMismatch, "party '" + ref.name + "' is not a value", span);
    } else {
      error(StructuralErrorKind::UnresolvedName,
            "unresolved name '" + ref.name + "'" + scope.unresolved_hint, span);
    }
    return std::nullopt;
  }

  std::optional<std::string> merge_currency(const StaticType& a, const StaticType& b, Span span) {
    if (a.currency && b.currency && *a.currency != *b.currency) {
      error(StructuralErrorKind::CurrencyMismatch,
            "mixed currencies " + *a.currency + " and " + *b.currency, span);
      return std::nullopt;
    }
    return a.currency ? a.currency : b.currency;
  }

  std::optional<StaticType> infer_node(const Binary& bin, Span span, const Scope& scope) {
    auto lhs = infer(*bin.lhs, scope);
    auto rhs = infer(*bin.rhs, scope);
    if (!lhs || !rhs) return std::nullopt;
    const ValueType l = lhs->type;
    const ValueType r = rhs->type;
    auto mismatch = [&]() -> std::optional<StaticType> {
      error(StructuralErrorKind::TypeMismatch,
            "operator '" + std::string(to_string(bin.op)) + "' cannot combine " + type_name(*lhs) +
                " and " + type_name(*rhs),
            span);
      return std::nullopt;
    };

    switch (bin.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Min:
      case BinaryOp::Max:
        if (l != r || !is_numeric(l)) return mismatch();
        return StaticType{l, merge_currency(*lhs, *rhs, span)};
      case BinaryOp::Mul:
        if (l == ValueType::Money && (r == ValueType::Number || r == ValueType::Percent)) return lhs;
        if (r == ValueType::Money && (l == ValueType::Number || l == ValueType::Percent)) return rhs;
        if (l == ValueType::Percent && (r == ValueType::Number || r == ValueType::Percent)) {
          return StaticType{ValueType::Percent, std::nullopt};
        }
        if (l == ValueType::Number && r == ValueType::Percent) return StaticType{ValueType::Percent, std::nullopt};
        if (l == ValueType::Number && r == ValueType::Number) return StaticType{ValueType::Number, std::nullopt};
        return mismatch();
      case BinaryOp::Div:
        if (r != ValueType::Number && r != ValueType::Percent) return mismatch();
        if (l == ValueType::Money) return lhs;
        if (l == ValueType::Number) return StaticType{ValueType::Number, std::nullopt};
        if (l == ValueType::Percent) {
          return StaticType{r == ValueType::Number ? ValueType::Percent : ValueType::Number, std::nullopt};
        }
        return mismatch();
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (l != r || !(is_numeric(l) || l == ValueType::Date)) return mismatch();
        merge_currency(*lhs, *rhs, span);
        return StaticType{ValueType::Boolean, std::nullopt};
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (l != r) return mismatch();
        merge_currency(*lhs, *rhs, span);
        return StaticType{ValueType::Boolean, std::nullopt};
      case BinaryOp::And:
      case BinaryOp::Or:
        if (l != ValueType::Boolean || r != ValueType::Boolean) return mismatch();
        return StaticType{ValueType::Boolean, std::nullopt};
    }
    return std::nullopt;
  }

  std::optional<StaticType> infer_node(const Unary& un, Span span, const Scope& scope) {
    auto operand = infer(*un.operand, scope);
    if (!operand) return std::nullopt;
    if (un.op == UnaryOp::Not && operand->type != ValueType::Boolean) {
      error(StructuralErrorKind::TypeMismatch, "'not' requires boolean, found " + type_name(*operand), span);
      return std::nullopt;
    }
    if (un.op == UnaryOp::Neg && !is_numeric(operand->type)) {
      error(StructuralErrorKind::TypeMismatch, "'-' requires a numeric operand, found " + type_name(*operand),
            span);
      return std::nullopt;
    }
    return operand;
  }

  std::optional<StaticType> infer_node(const Conditional& cond, Span span, const Scope& scope) {
    auto c = infer(*cond.condition, scope);
    auto t = infer(*cond.then_branch, scope);
    auto e = infer(*cond.else_branch, scope);
    if (c && c->type != ValueType::Boolean) {
      error(StructuralErrorKind::TypeMismatch, "condition must be boolean, found " + type_name(*c),
            cond.condition->span);
    }
    if (!t || !e) return std::nullopt;
    if (t->type != e->type) {
      error(StructuralErrorKind::TypeMismatch,
            "branches disagree: " + type_name(*t) + " and " + type_name(*e), span);
      return std::nullopt;
    }
    return StaticType{t->type, merge_currency(*t, *e, span)};
  }

  std::optional<StaticType> infer_node(const DaysBetween& days, Span span, const Scope& scope) {
    auto from = infer(*days.from, scope);
    auto to = infer(*days.to, scope);
    if (!from || !to) return std::nullopt;
    if (from->type != ValueType::Date || to->type != ValueType::Date) {
      error(StructuralErrorKind::TypeMismatch, "days() takes two dates", span);
      return std::nullopt;
    }
    return StaticType{ValueType::Number, std::nullopt};
  }

  std::optional<StaticType> infer_node(const Compound& comp, Span span, const Scope& scope) {
    auto base = infer(*comp.base, scope);
    auto rate = infer(*comp.rate, scope);
    auto periods = infer(*comp.periods, scope);
    if (!base || !rate || !periods) return std::nullopt;
    if (!is_numeric(base->type) || rate->type != ValueType::Percent || periods->type != ValueType::Number) {
      error(StructuralErrorKind::TypeMismatch, "compound() takes (numeric base, percent rate, number periods)",
            span);
      return std::nullopt;
    }
    return base;
  }

  std::optional<StaticType> infer_node(const InCatalog& in, Span span, const Scope& scope) {
    auto event = infer(*in.event, scope);
    if (!scope.catalogs.count(in.catalog)) {
      error(StructuralErrorKind::UnresolvedName, "unknown event catalog '" + in.catalog + "'", span);
      return std::nullopt;
    }
    if (!event) return std::nullopt;
    if (event->type != ValueType::Text) {
      error(StructuralErrorKind::TypeMismatch, "'in' requires a text event, found " + type_name(*event), span);
      return std::nullopt;
    }
    return StaticType{ValueType::Boolean, std::nullopt};
  }

  std::vector<StructuralError>& errors_;
};

}  // namespace

std::map<std::string, ValueType> status_types(const ContractAst& ast) {
  std::map<std::string, ValueType> types;
  std::vector<StructuralError> ignored;
  Checker checker(ignored);
  Scope scope;
  for (const auto& input : ast.inputs) scope.names.emplace(input.name, input.type);
  for (const auto& def : ast.definitions) scope.names.emplace(def.name, def.type);
  for (const auto& cat : ast.event_catalogs) scope.catalogs.insert(cat.name);
  for (const auto& clause : ast.clauses) {
    for (const auto& outcome : clause.outcomes) {
      if (const auto* set = std::get_if<Assignment>(&outcome.kind)) {
        if (types.count(set->status)) continue;
        if (auto t = checker.infer(*set->value, scope)) types.emplace(set->status, t->type);
      }
    }
  }
  return types;
}

std::vector<StructuralError> validate(const ContractAst& ast) {
  std::vector<StructuralError> errors;
  Checker checker(errors);

  std::map<std::string, Span> declared;
  auto declare = [&](const std::string& name, Span span, std::string_view what) {
    if (!declared.emplace(name, span).second) {
      checker.error(StructuralErrorKind::DuplicateName,
                    "duplicate " + std::string(what) + " name '" + name + "'", span);
    }
  };
  for (const auto& p : ast.parties) declare(p.name, p.span, "party");
  for (const auto& i : ast.inputs) declare(i.name, i.span, "input");
  for (const auto& d : ast.definitions) declare(d.name, d.span, "definition");
  for (const auto& c : ast.event_catalogs) declare(c.name, c.span, "event catalog");
  for (const auto& c : ast.clauses) declare(c.name, c.span, "clause");

  Scope values;
  for (const auto& p : ast.parties) values.parties.insert(p.name);
  for (const auto& c : ast.event_catalogs) values.catalogs.insert(c.name);
  for (const auto& i : ast.inputs) values.names.emplace(i.name, i.type);
  for (const auto& d : ast.definitions) values.names.emplace(d.name, d.type);

  for (const auto& def : ast.definitions) {
    if (auto t = checker.infer(*def.expr, values); t && t->type != def.type) {
      checker.error(StructuralErrorKind::TypeMismatch,
                    "definition '" + def.name + "' declared " + std::string(to_string(def.type)) +
                        " but its expression is " + type_name(*t),
                    def.span);
    }
  }

  for (const auto& cat : ast.event_catalogs) {
    std::set<std::string> seen;
    for (const auto& event : cat.listed) {
      if (!seen.insert(event).second) {
        checker.error(StructuralErrorKind::DuplicateName,
                      "event '" + event + "' listed twice in catalog '" + cat.name + "'", cat.span);
      }
    }
  }

  std::map<std::string, ValueType> statuses;
  for (const auto& clause : ast.clauses) {
    if (auto g = checker.infer(*clause.guard, values); g && g->type != ValueType::Boolean) {
      checker.error(StructuralErrorKind::TypeMismatch,
                    "guard of clause '" + clause.name + "' must be boolean, found " + type_name(*g),
                    clause.guard->span);
    }
    for (const auto& outcome : clause.outcomes) {
      if (const auto* pay = std::get_if<PayOutcome>(&outcome.kind)) {
        for (const auto* party : {&pay->from, &pay->to}) {
          if (!ast.has_party(*party)) {
            checker.error(StructuralErrorKind::UndeclaredParty, "undeclared party '" + *party + "'",
                          outcome.span);
          }
        }
        if (auto t = checker.infer(*pay->amount, values); t && t->type != ValueType::Money) {
          checker.error(StructuralErrorKind::TypeMismatch, "payment amount must be money, found " + type_name(*t),
                        pay->amount->span);
        }
      } else if (const auto* set = std::get_if<Assignment>(&outcome.kind)) {
        if (declared.count(set->status)) {
          checker.error(StructuralErrorKind::DuplicateName,
                        "status '" + set->status + "' collides with a declared name", outcome.span);
        }
        if (auto t = checker.infer(*set->value, values)) {
          auto [it, inserted] = statuses.emplace(set->status, t->type);
          if (!inserted && it->second != t->type) {
            checker.error(StructuralErrorKind::TypeMismatch,
                          "status '" + set->status + "' assigned both " + std::string(to_string(it->second)) +
                              " and " + type_name(*t),
                          outcome.span);
          }
        }
      }
    }
  }

  Scope status_scope;
  status_scope.names = statuses;
  status_scope.unresolved_hint = " (rectification reads status names only)";
  for (const auto& rule : ast.rectify_rules) {
    if (auto g = checker.infer(*rule.guard, status_scope); g && g->type != ValueType::Boolean) {
      checker.error(StructuralErrorKind::TypeMismatch, "rectify guard must be boolean, found " + type_name(*g),
                    rule.guard->span);
    }
    for (const auto& stmt : rule.body) {
      const auto it = statuses.find(stmt.assignment.status);
      if (it == statuses.end()) {
        checker.error(StructuralErrorKind::UnresolvedName,
                      "rectify assigns unknown status '" + stmt.assignment.status + "'", stmt.span);
        checker.infer(*stmt.assignment.value, status_scope);
        continue;
      }
      if (auto t = checker.infer(*stmt.assignment.value, status_scope); t && t->type != it->second) {
        checker.error(StructuralErrorKind::TypeMismatch,
                      "status '" + it->first + "' is " + std::string(to_string(it->second)) + ", assigned " +
                          type_name(*t),
                      stmt.span);
      }
    }
  }

  for (const auto& constraint : ast.constraints) {
    if (constraint.deadline_days && *constraint.deadline_days <= 0) {
      checker.error(StructuralErrorKind::InvalidConstraint, "deadline must be a positive number of days",
                    constraint.span);
    }
    if (constraint.overridable_by && !ast.has_party(*constraint.overridable_by)) {
      checker.error(StructuralErrorKind::UndeclaredParty,
                    "undeclared party '" + *constraint.overridable_by + "'", constraint.span);
    }
  }

  std::stable_sort(errors.begin(), errors.end(),
                   [](const auto& a, const auto& b) { return a.span.offset < b.span.offset; });
  return errors;
}

DependencyGraph::DependencyGraph(const ContractAst& ast) {
  std::set<std::string> known;
  for (const auto& input : ast.inputs) {
    nodes_.push_back(input.name);
    known.insert(input.name);
  }
  for (const auto& def : ast.definitions) {
    if (known.insert(def.name).second) nodes_.push_back(def.name);
  }
  for (const auto& node : nodes_) edges_[node];
  for (const auto& def : ast.definitions) {
    auto& out = edges_[def.name];
    for (const auto& name : referenced_names(*def.expr)) {
      if (known.count(name) && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
  }
}

const std::vector<std::string>& DependencyGraph::successors(const std::string& node) const {
  static const std::vector<std::string> none;
  auto it = edges_.find(node);
  return it == edges_.end() ? none : it->second;
}

bool DependencyGraph::has_edge(const std::string& from, const std::string& to) const {
  const auto& out = successors(from);
  return std::find(out.begin(), out.end(), to) != out.end();
}

std::size_t DependencyGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [node, out] : edges_) n += out.size();
  return n;
}

std::optional<std::vector<std::string>> DependencyGraph::topological_order() const {
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> marks;
  std::vector<std::string> order;
  bool cyclic = false;
  std::function<void(const std::string&)> visit = [&](const std::string& node) {
    auto& mark = marks[node];
    if (mark == Mark::Done || cyclic) return;
    if (mark == Mark::Active) {
      cyclic = true;
      return;
    }
    mark = Mark::Active;
    for (const auto& next : successors(node)) visit(next);
    marks[node] = Mark::Done;
    order.push_back(node);
  };
  for (const auto& node : nodes_) visit(node);
  if (cyclic) return std::nullopt;
  return order;
}

std::vector<std::vector<std::string>> DependencyGraph::cycles() const {
  // Tarjan's algorithm.
  std::map<std::string, int> index;
  std::map<std::string, int> lowlink;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> components;
  int counter = 0;

  std::function<void(const std::string&)> connect = [&](const std::string& v) {
    index[v] = lowlink[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : successors(v)) {
      if (!index.count(w)) {
        connect(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack.count(w)) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::vector<std::string> component;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1 || has_edge(v, v)) components.push_back(std::move(component));
    }
  };
  for (const auto& node : nodes_) {
    if (!index.count(node)) connect(node);
  }

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < nodes_.size(); ++i) position[nodes_[i]] = i;
  for (auto& component : components) {
    std::sort(component.begin(), component.end(),
              [&](const auto& a, const auto& b) { return position[a] < position[b]; });
  }
  std::sort(components.begin(), components.end(),
            [&](const auto& a, const auto& b) { return position[a.front()] < position[b.front()]; });
  return components;
}

DependencyGraph dependency_graph(const ContractAst& ast) { return DependencyGraph(ast); }

}  // namespace lexc
