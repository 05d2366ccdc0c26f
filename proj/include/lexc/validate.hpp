#pragma once

#include "lexc/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lexc {

enum class StructuralErrorKind {
  DuplicateName,
  UnresolvedName,
  UndeclaredParty,
  TypeMismatch,
  CurrencyMismatch,
  InvalidConstraint,
};

std::string_view to_string(StructuralErrorKind kind);

struct StructuralError {
  StructuralErrorKind kind;
  std::string message;
  Span span;
};

// Static type of an expression. Money carries its currency when it is known
// without running the contract (literals and values derived from them).
struct StaticType {
  ValueType type;
  std::optional<std::string> currency;
};

// Empty iff names are unique, every reference resolves, and every expression
// type-checks. Errors are ordered by source position.
std::vector<StructuralError> validate(const ContractAst& ast);

// Declared type of every status name set by a clause (first assignment wins
// when assignments disagree; validate() reports the disagreement).
std::map<std::string, ValueType> status_types(const ContractAst& ast);

// Edges from each definition to the definitions and inputs its expression
// reads. Inputs are sinks.
class DependencyGraph {
 public:
  explicit DependencyGraph(const ContractAst& ast);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<std::string>& successors(const std::string& node) const;
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t edge_count() const;

  // Dependencies before dependents; nullopt when a cycle exists.
  std::optional<std::vector<std::string>> topological_order() const;

  // Strongly connected components with more than one member or a self-loop,
  // members listed in node order, components ordered by first member.
  std::vector<std::vector<std::string>> cycles() const;

 private:
  std::vector<std::string> nodes_;
  std::map<std::string, std::vector<std::string>> edges_;
};

DependencyGraph dependency_graph(const ContractAst& ast);

}  // namespace lexc
