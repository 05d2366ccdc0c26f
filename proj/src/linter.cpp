#include "lexc/linter.hpp"

#include "lexc/evaluator.hpp"
#include "lexc/validate.hpp"

#include <algorithm>
#include <set>

namespace lexc {

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string_view to_string(Taxonomy taxonomy) {
  switch (taxonomy) {
    case Taxonomy::PhraseAmbiguity: return "PhraseAmbiguity";
    case Taxonomy::ExtractAmbiguity: return "ExtractAmbiguity";
    case Taxonomy::AbsenceAmbiguity: return "AbsenceAmbiguity";
  }
  return "?";
}

Severity default_severity(std::string_view code) {
  return code == "LEX004" ? Severity::Warning : Severity::Error;
}

Taxonomy taxonomy_of(std::string_view code) {
  if (code == "LEX001" || code == "LEX004") return Taxonomy::PhraseAmbiguity;
  if (code == "LEX005") return Taxonomy::AbsenceAmbiguity;
  return Taxonomy::ExtractAmbiguity;
}

namespace {

Finding make_finding(std::string code, Span span, std::string message) {
  Finding f{std::move(code), Severity::Error, span, std::move(message), Taxonomy::ExtractAmbiguity};
  f.severity = default_severity(f.code);
  f.taxonomy = taxonomy_of(f.code);
  return f;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

// Value of an expression that reads no names, if it evaluates cleanly.
std::optional<Value> constant_value(const Expr& expr) {
  if (!referenced_names(expr, true).empty()) return std::nullopt;
  try {
    return eval_expr(expr, Environment{});
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

template <typename Fn>
void for_each_reference(const Expr& expr, Fn&& fn) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NameRef>) {
          fn(node.name, expr.span, false);
        } else if constexpr (std::is_same_v<T, Binary>) {
          for_each_reference(*node.lhs, fn);
          for_each_reference(*node.rhs, fn);
        } else if constexpr (std::is_same_v<T, Unary>) {
          for_each_reference(*node.operand, fn);
        } else if constexpr (std::is_same_v<T, Conditional>) {
          for_each_reference(*node.condition, fn);
          for_each_reference(*node.then_branch, fn);
          for_each_reference(*node.else_branch, fn);
        } else if constexpr (std::is_same_v<T, DaysBetween>) {
          for_each_reference(*node.from, fn);
          for_each_reference(*node.to, fn);
        } else if constexpr (std::is_same_v<T, Compound>) {
          for_each_reference(*node.base, fn);
          for_each_reference(*node.rate, fn);
          for_each_reference(*node.periods, fn);
        } else if constexpr (std::is_same_v<T, InCatalog>) {
          for_each_reference(*node.event, fn);
          fn(node.catalog, expr.span, true);
        }
      },
      expr.node);
}

}  // namespace

std::vector<Finding> detect_catch_all(const ContractAst& ast) {
  std::vector<Finding> out;
  for (const auto& catalog : ast.event_catalogs) {
    if (!catalog.has_wildcard) continue;
    out.push_back(make_finding("LEX001", catalog.wildcard_span,
                               "event catalog '" + catalog.name +
                                   "' ends with 'other', so any unlisted event qualifies"));
  }
  return out;
}

std::vector<Finding> detect_cycles(const ContractAst& ast) {
  std::vector<Finding> out;
  for (const auto& cycle : dependency_graph(ast).cycles()) {
    const Definition* first = ast.find_definition(cycle.front());
    out.push_back(make_finding("LEX002", first ? first->span : Span{},
                               "circular definition: " + join(cycle)));
  }
  return out;
}

std::vector<Finding> detect_unbounded_rectification(const ContractAst& ast) {
  std::vector<Finding> out;
  for (const auto& rule : ast.rectify_rules) {
    Environment after;
    std::string problem;
    for (const auto& name : referenced_names(*rule.guard)) {
      const SetStatement* last = nullptr;
      for (const auto& stmt : rule.body) {
        if (stmt.assignment.status == name) last = &stmt;
      }
      if (!last) {
        problem = "never assigns '" + name + "'";
        break;
      }
      auto value = constant_value(*last->assignment.value);
      if (!value) {
        problem = "assigns '" + name + "' a non-constant value";
        break;
      }
      after.values[name] = *value;
    }
    if (problem.empty()) {
      try {
        auto result = eval_expr(*rule.guard, after);
        const auto* holds = std::get_if<bool>(&result);
        if (!holds || *holds) problem = "leaves its guard true";
      } catch (const std::exception&) {
        problem = "leaves its guard undecided";
      }
    }
    if (!problem.empty()) {
      out.push_back(make_finding("LEX003", rule.span,
                                 "rectify rule '" + rule.target + "' " + problem +
                                     ", so rectification may repeat without end"));
    }
  }
  return out;
}

std::vector<Finding> detect_discretionary_override(const ContractAst& ast) {
  std::vector<Finding> out;
  for (const auto& constraint : ast.constraints) {
    if (!constraint.overridable_by) continue;
    out.push_back(make_finding("LEX004", constraint.span,
                               "constraint \"" + constraint.description + "\" can be set aside by " +
                                   *constraint.overridable_by + ", so it is a guideline rather than a bound"));
  }
  return out;
}

std::vector<Finding> detect_absence(const ContractAst& ast) {
  std::vector<Finding> out;
  std::set<std::string, std::less<>> values;
  for (const auto& input : ast.inputs) values.insert(input.name);
  for (const auto& def : ast.definitions) values.insert(def.name);
  std::set<std::string, std::less<>> statuses;
  for (const auto& name : clause_status_names(ast)) statuses.insert(name);
  for (const auto& rule : ast.rectify_rules) {
    for (const auto& stmt : rule.body) statuses.insert(stmt.assignment.status);
  }

  std::set<std::string, std::less<>> used;
  auto scan = [&](const Expr& expr, const std::set<std::string, std::less<>>& scope) {
    for_each_reference(expr, [&](const std::string& name, const Span& span, bool catalog) {
      used.insert(name);
      const bool known = catalog ? ast.find_catalog(name) != nullptr : scope.count(name) > 0;
      if (!known) {
        out.push_back(make_finding("LEX005", span, "'" + name + "' is referenced but never declared"));
      }
    });
  };

  for (const auto& def : ast.definitions) scan(*def.expr, values);
  for (const auto& clause : ast.clauses) {
    scan(*clause.guard, values);
    for (const auto& outcome : clause.outcomes) {
      if (const auto* pay = std::get_if<PayOutcome>(&outcome.kind)) scan(*pay->amount, values);
      if (const auto* set = std::get_if<Assignment>(&outcome.kind)) scan(*set->value, values);
    }
  }
  for (const auto& rule : ast.rectify_rules) {
    scan(*rule.guard, statuses);
    for (const auto& stmt : rule.body) scan(*stmt.assignment.value, statuses);
  }

  for (const auto& input : ast.inputs) {
    if (!used.count(input.name)) {
      out.push_back(make_finding("LEX005", input.span,
                                 "input '" + input.name + "' is declared but no term of the contract uses it"));
    }
  }
  return out;
}

namespace {

struct ConstantSet {
  const Clause* clause;
  std::string status;
  Value value;
};

// Inputs and boolean definitions a guard depends on, or an error message
// when it reads anything else.
struct GuardSupport {
  std::set<std::string> inputs;
  std::set<std::string> definitions;
  std::string problem;
};

void collect_support(const ContractAst& ast, const Expr& expr, GuardSupport& support) {
  for (const auto& name : referenced_names(expr)) {
    if (const InputDecl* input = ast.find_input(name)) {
      if (input->type != ValueType::Boolean) {
        support.problem = "reads non-boolean input '" + name + "'";
        return;
      }
      support.inputs.insert(name);
    } else if (const Definition* def = ast.find_definition(name)) {
      if (def->type != ValueType::Boolean) {
        support.problem = "reads non-boolean definition '" + name + "'";
        return;
      }
      if (!support.definitions.insert(name).second) continue;
      collect_support(ast, *def->expr, support);
      if (!support.problem.empty()) return;
    } else {
      support.problem = "reads unresolved name '" + name + "'";
      return;
    }
  }
}

}  // namespace

ConflictScan detect_conflicts(const ContractAst& ast) {
  ConflictScan scan;
  std::vector<ConstantSet> sets;
  for (const auto& clause : ast.clauses) {
    for (const auto& outcome : clause.outcomes) {
      const auto* set = std::get_if<Assignment>(&outcome.kind);
      if (!set) continue;
      if (auto value = constant_value(*set->value)) sets.push_back({&clause, set->status, *value});
    }
  }

  const auto order = dependency_graph(ast).topological_order();
  std::set<std::tuple<const Clause*, const Clause*, std::string>> seen;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const ConstantSet& a = sets[i];
      const ConstantSet& b = sets[j];
      if (a.clause == b.clause || a.status != b.status || a.value == b.value) continue;
      if (!seen.insert({a.clause, b.clause, a.status}).second) continue;

      const std::string pair = "clauses " + a.clause->name + " and " + b.clause->name;
      GuardSupport support;
      collect_support(ast, *a.clause->guard, support);
      if (support.problem.empty()) collect_support(ast, *b.clause->guard, support);
      if (support.problem.empty() && !order) support.problem = "has circular definitions";
      if (support.problem.empty() && support.inputs.size() > kMaxConflictVariables) {
        support.problem = "reads " + std::to_string(support.inputs.size()) + " boolean inputs";
      }
      if (!support.problem.empty()) {
        scan.skipped.push_back(pair + " skipped: guard " + support.problem);
        continue;
      }

      const std::vector<std::string> vars(support.inputs.begin(), support.inputs.end());
      const std::uint64_t rows = std::uint64_t{1} << vars.size();
      for (std::uint64_t mask = 0; mask < rows; ++mask) {
        Environment env;
        for (std::size_t v = 0; v < vars.size(); ++v) env.values[vars[v]] = ((mask >> v) & 1) != 0;
        bool both = false;
        try {
          for (const auto& name : *order) {
            if (support.definitions.count(name)) {
              env.values[name] = eval_expr(*ast.find_definition(name)->expr, env);
            }
          }
          both = std::get<bool>(eval_expr(*a.clause->guard, env)) && std::get<bool>(eval_expr(*b.clause->guard, env));
        } catch (const std::exception&) {
          both = false;
        }
        if (!both) continue;
        ConflictWitness witness{a.clause->name, b.clause->name, a.status, {}};
        std::string shown;
        for (const auto& var : vars) {
          const bool value = std::get<bool>(env.values.at(var));
          witness.assignment[var] = value;
          shown += (shown.empty() ? "" : ", ") + var + "=" + (value ? "true" : "false");
        }
        scan.findings.push_back(make_finding(
            "LEX006", b.clause->span,
            pair + " can both fire and set '" + a.status + "' to " + serialize_value(a.value) + " and " +
                serialize_value(b.value) + " (witness: " + (shown.empty() ? "always" : shown) + ")"));
        scan.witnesses.push_back(std::move(witness));
        break;
      }
    }
  }
  return scan;
}

std::vector<Finding> lint(const ContractAst& ast) {
  std::vector<Finding> all;
  auto append = [&](std::vector<Finding> part) {
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  append(detect_catch_all(ast));
  append(detect_cycles(ast));
  append(detect_unbounded_rectification(ast));
  append(detect_discretionary_override(ast));
  append(detect_absence(ast));
  append(detect_conflicts(ast).findings);
  std::stable_sort(all.begin(), all.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.span.offset, a.code) < std::tie(b.span.offset, b.code);
  });
  return all;
}

}  // namespace lexc
