#include "recad/script/lexer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "recad/error.hpp"

namespace recad::script {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kNumber: return "number";
    case TokenKind::kString: return "string";
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kOperator: return "operator";
    case TokenKind::kDelimiter: return "delimiter";
    case TokenKind::kNewline: return "newline";
    case TokenKind::kIndent: return "indent";
    case TokenKind::kDedent: return "dedent";
    case TokenKind::kEnd: return "end of input";
  }
  return "?";
}

namespace {

// Reserved words of the host language. Only some are part of the grammar; the
// parser rejects the rest as unsupported constructs.
constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",     "assert", "async", "await", "break",
    "class", "continue", "def",   "del",      "elif",   "else",   "except", "finally", "for",
    "from",  "global", "if",      "import",   "in",     "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",    "while",  "with",   "yield"};

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    while (pos_ < src_.size()) {
      if (at_line_start_) {
        if (!indentation()) continue;
      }
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\f') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '\\' && pos_ + 1 < src_.size() &&
                 (src_[pos_ + 1] == '\n' || src_[pos_ + 1] == '\r')) {
        advance();
        if (src_[pos_] == '\r') advance();
        if (pos_ < src_.size() && src_[pos_] == '\n') advance();
      } else if (c == '\r' || c == '\n') {
        const Span span = here(1);
        if (c == '\r') advance();
        if (pos_ < src_.size() && src_[pos_] == '\n') advance();
        if (depth_ == 0) {
          push(TokenKind::kNewline, "\\n", span);
          at_line_start_ = true;
        }
      } else if (ident_start(c)) {
        identifier();
      } else if (digit(c) || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) {
        number();
      } else if (c == '"' || c == '\'') {
        string();
      } else {
        punctuation();
      }
    }
    if (!out_.empty() && out_.back().kind != TokenKind::kNewline &&
        out_.back().kind != TokenKind::kDedent) {
      push(TokenKind::kNewline, "\\n", here(0));
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenKind::kDedent, "", here(0));
    }
    push(TokenKind::kEnd, "", here(0));
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int column) const {
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << msg;
    throw Error(ErrorCategory::kParse, os.str());
  }

  Span here(std::size_t length) const { return {line_, column_, pos_, length}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void push(TokenKind kind, std::string lexeme, Span span, double number = 0.0) {
    out_.push_back(Token{kind, std::move(lexeme), number, span});
  }

  // Measures leading whitespace of a logical line and emits indent/dedent.
  // Returns false when the line is blank or a comment and was consumed.
  bool indentation() {
    int width = 0;
    const int line = line_;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
      width = src_[pos_] == '\t' ? (width / 8 + 1) * 8 : width + 1;
      advance();
    }
    if (pos_ >= src_.size()) return false;
    const char c = src_[pos_];
    if (c == '\n' || c == '\r' || c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      if (pos_ < src_.size()) advance();
      return false;
    }
    at_line_start_ = false;
    if (width > indents_.back()) {
      indents_.push_back(width);
      push(TokenKind::kIndent, "", here(0));
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::kDedent, "", here(0));
      }
      if (width != indents_.back()) fail("unindent does not match any outer indentation level", line, column_);
    }
    return true;
  }

  void identifier() {
    const Span start = here(0);
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    std::string word(src_.substr(begin, pos_ - begin));
    Span span = start;
    span.length = word.size();
    const TokenKind kind = is_keyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier;
    push(kind, std::move(word), span);
  }

  void number() {
    const Span start = here(0);
    const std::size_t begin = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && (digit(src_[pos_]) || src_[pos_] == '_')) advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && digit(src_[look])) {
        while (pos_ < look) advance();
        digits();
      }
    }
    if (pos_ < src_.size() && ident_char(src_[pos_])) {
      fail(std::string("invalid character '") + src_[pos_] + "' in number", line_, column_);
    }
    std::string text(src_.substr(begin, pos_ - begin));
    std::string clean;
    for (char c : text) {
      if (c != '_') clean.push_back(c);
    }
    double value = 0.0;
    const auto res = std::from_chars(clean.data(), clean.data() + clean.size(), value);
    if (res.ec == std::errc::result_out_of_range) {
      fail("numeric literal out of range", start.line, start.column);
    }
    if (res.ec != std::errc() || res.ptr != clean.data() + clean.size()) {
      fail("malformed number '" + text + "'", start.line, start.column);
    }
    Span span = start;
    span.length = text.size();
    push(TokenKind::kNumber, std::move(text), span, value);
  }

  void string() {
    const Span start = here(0);
    const char quote = src_[pos_];
    const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
    const std::size_t open = triple ? 3 : 1;
    for (std::size_t i = 0; i < open; ++i) advance();
    std::string value;
    for (;;) {
      if (pos_ >= src_.size()) fail("unterminated string", start.line, start.column);
      const char c = src_[pos_];
      if (!triple && (c == '\n' || c == '\r')) fail("unterminated string", start.line, start.column);
      if (c == quote) {
        if (!triple) {
          advance();
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
          for (int i = 0; i < 3; ++i) advance();
          break;
        }
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
        const char e = src_[pos_];
        switch (e) {
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case '\\': value.push_back('\\'); break;
          case '\'': value.push_back('\''); break;
          case '"': value.push_back('"'); break;
          case '\n': break;
          default:
            value.push_back('\\');
            value.push_back(e);
        }
        advance();
        continue;
      }
      value.push_back(c);
      advance();
    }
    Span span = start;
    span.length = pos_ - start.offset;
    push(TokenKind::kString, std::move(value), span);
  }

  void punctuation() {
    static constexpr std::array<std::string_view, 14> kMulti = {
        "**=", "//=", "**", "//", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "->"};
    const Span start = here(0);
    for (std::string_view op : kMulti) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        Span span = start;
        span.length = op.size();
        push(TokenKind::kOperator, std::string(op), span);
        return;
      }
    }
    const char c = src_[pos_];
    static constexpr std::string_view kOps = "+-*/%=<>@&|^~";
    static constexpr std::string_view kDelims = "()[]{},:.;";
    Span span = start;
    span.length = 1;
    if (kOps.find(c) != std::string_view::npos) {
      advance();
      push(TokenKind::kOperator, std::string(1, c), span);
    } else if (kDelims.find(c) != std::string_view::npos) {
      if (c == '(' || c == '[' || c == '{') ++depth_;
      if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
      advance();
      push(TokenKind::kDelimiter, std::string(1, c), span);
    } else {
      const unsigned char u = static_cast<unsigned char>(c);
      std::ostringstream msg;
      if (u < 0x20 || u >= 0x7f) {
        msg << "illegal character (byte 0x" << std::hex << static_cast<int>(u) << ")";
      } else {
        msg << "illegal character '" << c << "'";
      }
      fail(msg.str(), line_, column_);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_{0};
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace recad::script
