#include "lexer.hpp"

#include "lexc/parser.hpp"

#include <cctype>

namespace lexc::detail {

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return quote_text(token.text);
    case TokenKind::Percent: return token.text + "%";
    default: return "'" + token.text + "'";
  }
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        tokens.push_back({TokenKind::End, "", span_from(pos_, line_, column_)});
        return tokens;
      }
      tokens.push_back(next());
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Span span_from(std::size_t start, int line, int column) const {
    return Span{start, pos_ - start, line, column};
  }

  bool looks_like_date() const {
    // YYYY-MM-DD
    if (pos_ + 10 > text_.size()) return false;
    for (std::size_t i = 0; i < 10; ++i) {
      const char c = text_[pos_ + i];
      if (i == 4 || i == 7) {
        if (c != '-') return false;
      } else if (!is_digit(c)) {
        return false;
      }
    }
    return pos_ + 10 == text_.size() || !is_ident_char(text_[pos_ + 10]);
  }

  Token next() {
    const std::size_t start = pos_;
    const int line = line_;
    const int column = column_;
    const char c = text_[pos_];

    if (is_ident_start(c)) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
      return {TokenKind::Identifier, std::string(text_.substr(start, pos_ - start)),
              span_from(start, line, column)};
    }

    if (is_digit(c)) {
      if (looks_like_date()) {
        for (int i = 0; i < 10; ++i) advance();
        return {TokenKind::Date, std::string(text_.substr(start, 10)), span_from(start, line, column)};
      }
      while (pos_ < text_.size() &&
             (is_digit(text_[pos_]) || text_[pos_] == '_' ||
              (text_[pos_] == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])))) {
        advance();
      }
      std::string digits(text_.substr(start, pos_ - start));
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        throw ParseError(line_, column_, "end of number", std::string("'") + text_[pos_] + "'");
      }
      if (pos_ < text_.size() && text_[pos_] == '%') {
        advance();
        return {TokenKind::Percent, std::move(digits), span_from(start, line, column)};
      }
      return {TokenKind::Number, std::move(digits), span_from(start, line, column)};
    }

    if (c == '"') {
      advance();
      std::string body;
      for (;;) {
        if (pos_ >= text_.size() || text_[pos_] == '\n') {
          throw ParseError(line_, column_, "closing '\"'", pos_ >= text_.size() ? "end of input" : "end of line");
        }
        char ch = text_[pos_];
        if (ch == '"') {
          advance();
          break;
        }
        if (ch == '\\') {
          advance();
          if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\\')) {
            throw ParseError(line_, column_, "'\\\"' or '\\\\' escape", "invalid escape");
          }
          ch = text_[pos_];
        }
        body += ch;
        advance();
      }
      return {TokenKind::String, std::move(body), span_from(start, line, column)};
    }

    static constexpr std::string_view two_char[] = {"->", "<=", ">=", "!="};
    for (auto sym : two_char) {
      if (text_.substr(pos_, 2) == sym) {
        advance();
        advance();
        return {TokenKind::Symbol, std::string(sym), span_from(start, line, column)};
      }
    }
    static constexpr std::string_view one_char = "{}();:,=+-*/<>";
    if (one_char.find(c) != std::string_view::npos) {
      advance();
      return {TokenKind::Symbol, std::string(1, c), span_from(start, line, column)};
    }
    throw ParseError(line, column, "a token", std::string("'") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace lexc::detail
