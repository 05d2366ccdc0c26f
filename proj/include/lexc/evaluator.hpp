#pragma once

#include "lexc/ast.hpp"
#include "lexc/ledger.hpp"
#include "lexc/parser.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexc {

enum class EvalErrorKind {
  UnboundInput,
  DivisionByZero,
  CyclicDefinition,
  CurrencyMismatch,
  StatusConflict,
  NegativeDayCount,
  BindingMismatch,  // scenario binds an undeclared name or a value of the wrong type
};

std::string_view to_string(EvalErrorKind kind);

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, std::string detail, Span span = {});

  EvalErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  const Span& span() const { return span_; }

 private:
  EvalErrorKind kind_;
  std::string detail_;
  Span span_;
};

// "ERROR UnboundInput secretary_of_state_order"
std::string format_error(const EvalError& error);

struct Environment {
  std::map<std::string, Value, std::less<>> values;
  std::map<std::string, EventCatalogDecl, std::less<>> catalogs;
};

// Exact evaluation. A name missing from the environment is an UnboundInput.
Value eval_expr(const Expr& expr, const Environment& env);

using StatusStore = std::map<std::string, Value, std::less<>>;

struct RectificationResult {
  StatusStore store;
  int passes = 1;  // firing passes, at least 1
};

inline constexpr int kDefaultMaxPasses = 8;

// Runs every rule whose guard holds, in source order, until a pass fires
// nothing. More than max_passes firing passes is a StatusConflict.
RectificationResult apply_rectification(StatusStore store, const std::vector<RectifyRule>& rules,
                                        int max_passes = kDefaultMaxPasses);

struct RunOptions {
  int max_passes = kDefaultMaxPasses;
};

// Throws EvalError. The contract is assumed to validate.
OutcomeLedger run(const ContractAst& ast, const Scenario& scenario, const RunOptions& options = {});

}  // namespace lexc
