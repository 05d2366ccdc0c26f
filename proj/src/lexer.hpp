#pragma once

#include "lexc/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lexc::detail {

enum class TokenKind { Identifier, Number, Percent, Date, String, Symbol, End };

struct Token {
  TokenKind kind;
  std::string text;  // identifier/symbol/number spelling, or decoded string body
  Span span;
};

std::string describe(const Token& token);

// Tokenizes the whole input. Throws ParseError on a malformed token.
std::vector<Token> tokenize(std::string_view text);

}  // namespace lexc::detail
