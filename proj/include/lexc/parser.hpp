#pragma once

#include "lexc/ast.hpp"
#include "lexc/validate.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexc {

// First syntax error in a contract or scenario file.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

class DuplicateBindingError : public ParseError {
 public:
  DuplicateBindingError(int line, int column, const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct Binding {
  std::string name;
  Value value;
  int line = 0;
};

struct Scenario {
  std::vector<Binding> bindings;

  const Value* find(std::string_view name) const;
  Scenario without(std::string_view name) const;
};

// Throws ParseError.
ContractAst parse(std::string_view text);

struct ParsedContract {
  ContractAst ast;
  std::vector<StructuralError> errors;
};

// parse() followed by validate().
ParsedContract parse_and_validate(std::string_view text);

// Lines of `name = literal`; `#` starts a comment. Throws ParseError or
// DuplicateBindingError.
Scenario parse_scenario(std::string_view text);

std::string serialize_scenario(const Scenario& scenario);

}  // namespace lexc
