#pragma once

#include "lexc/ast.hpp"

#include <string>

namespace lexc {

// DSL text that re-parses to a structurally equal AST. Declarations are
// grouped by kind in a fixed order; parentheses are emitted only where
// precedence requires them.
std::string print_canonical(const ContractAst& ast);

std::string print_expr(const Expr& expr);

// Literal in DSL syntax ("GBP 26640000", "7%", "2023-01-01", "\"text\"").
std::string print_literal(const Value& value);

}  // namespace lexc
