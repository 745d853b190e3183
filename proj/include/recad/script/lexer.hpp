#pragma once

// Tokenizer for the CAD scripting language (see docs/grammar.md).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace recad::script {

enum class TokenKind {
  kIdentifier,
  kNumber,
  kString,
  kKeyword,
  kOperator,
  kDelimiter,
  kNewline,
  kIndent,
  kDedent,
  kEnd,
};

std::string_view to_string(TokenKind kind);

/// 1-based line and column of the first character, byte offset and length.
struct Span {
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string lexeme;  // decoded contents for strings
  double number = 0.0;
  Span span;
};

/// Splits source into tokens, turning indentation into indent/dedent tokens.
/// Newlines inside brackets and after a backslash are joined. The stream ends
/// with a newline (unless empty), the pending dedents and one kEnd token.
/// Throws Error{kParse} with line/column for illegal characters, unterminated
/// strings and inconsistent dedents.
std::vector<Token> tokenize(std::string_view source);

}  // namespace recad::script
