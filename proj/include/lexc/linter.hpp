#pragma once

#include "lexc/ast.hpp"

#include <map>
#include <string>
#include <vector>

namespace lexc {

enum class Severity { Error, Warning };
enum class Taxonomy { PhraseAmbiguity, ExtractAmbiguity, AbsenceAmbiguity };

std::string_view to_string(Severity severity);
std::string_view to_string(Taxonomy taxonomy);

struct Finding {
  std::string code;  // LEX001 .. LEX006
  Severity severity;
  Span span;
  std::string message;
  Taxonomy taxonomy;

  friend bool operator==(const Finding&, const Finding&) = default;
};

Severity default_severity(std::string_view code);
Taxonomy taxonomy_of(std::string_view code);

// LEX001: event catalog with the `other` wildcard.
std::vector<Finding> detect_catch_all(const ContractAst& ast);

// LEX002: circular definitions.
std::vector<Finding> detect_cycles(const ContractAst& ast);

// LEX003: rectify rule whose body does not provably falsify its own guard.
std::vector<Finding> detect_unbounded_rectification(const ContractAst& ast);

// LEX004: constraint that a party may override.
std::vector<Finding> detect_discretionary_override(const ContractAst& ast);

// LEX005: undeclared references and inputs nothing reads.
std::vector<Finding> detect_absence(const ContractAst& ast);

struct ConflictWitness {
  std::string first_clause;
  std::string second_clause;
  std::string status;
  std::map<std::string, bool> assignment;  // boolean inputs the two guards read
};

struct ConflictScan {
  std::vector<Finding> findings;
  std::vector<ConflictWitness> witnesses;  // parallel to findings
  std::vector<std::string> skipped;        // pairs not examined, with the reason
};

inline constexpr std::size_t kMaxConflictVariables = 20;

// LEX006: two clauses set one status to different constants and some
// assignment of boolean inputs satisfies both guards.
ConflictScan detect_conflicts(const ContractAst& ast);

// All detectors, ordered by source position then code.
std::vector<Finding> lint(const ContractAst& ast);

}  // namespace lexc
