#include <sstream>

#include "recad/error.hpp"
#include "recad/script/ast.hpp"

namespace recad::script {

namespace {

// Bounds the syntax tree depth so evaluation and destruction stay shallow.
constexpr int kMaxDepth = 1000;

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kNewline:
    case TokenKind::kIndent:
    case TokenKind::kDedent:
    case TokenKind::kEnd:
      return std::string(to_string(t.kind));
    case TokenKind::kString:
      return "string";
    default:
      return "'" + t.lexeme + "'";
  }
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  ScriptAst program() {
    ScriptAst ast;
    while (!check(TokenKind::kEnd)) {
      if (match(TokenKind::kNewline)) continue;
      ast.statements.push_back(statement());
    }
    return ast;
  }

 private:
  [[noreturn]] void fail(const Span& at, const std::string& msg) const {
    std::ostringstream os;
    os << "line " << at.line << ", column " << at.column << ": " << msg;
    throw Error(ErrorCategory::kParse, os.str());
  }
  [[noreturn]] void expected(const std::string& what) const {
    fail(peek().span, "expected " + what + " but found " + describe(peek()));
  }
  [[noreturn]] void rejected(const Token& t, const std::string& what) const {
    fail(t.span, "rejected construct: " + what + " is not part of the script language");
  }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool check(TokenKind kind) const { return peek().kind == kind; }
  bool check(TokenKind kind, std::string_view lexeme) const {
    return peek().kind == kind && peek().lexeme == lexeme;
  }
  bool match(TokenKind kind) {
    if (!check(kind)) return false;
    next();
    return true;
  }
  bool match(TokenKind kind, std::string_view lexeme) {
    if (!check(kind, lexeme)) return false;
    next();
    return true;
  }
  const Token& expect(TokenKind kind, std::string_view lexeme) {
    if (!check(kind, lexeme)) expected("'" + std::string(lexeme) + "'");
    return next();
  }
  const Token& expect_kind(TokenKind kind, const std::string& what) {
    if (!check(kind)) expected(what);
    return next();
  }

  struct DepthGuard {
    DepthGuard(Parser& p, const Span& at) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail(at, "expression nested too deeply");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  // Each link of an operator or postfix chain deepens the tree by one.
  struct ChainGuard {
    explicit ChainGuard(Parser& p) : parser(p) {}
    void step(const Span& at) {
      ++links;
      if (++parser.depth_ > kMaxDepth) parser.fail(at, "expression chain too long");
    }
    ~ChainGuard() { parser.depth_ -= links; }
    Parser& parser;
    int links = 0;
  };

  // ---------------------------------------------------------------------
  // Statements

  StmtPtr statement() {
    const Token& t = peek();
    if (t.kind == TokenKind::kIndent) fail(t.span, "unexpected indent");
    if (t.kind == TokenKind::kKeyword) {
      if (t.lexeme == "for") return for_statement();
      if (t.lexeme == "import" || t.lexeme == "from") {
        StmtPtr s = import_statement();
        end_of_statement();
        return s;
      }
      if (t.lexeme == "def") rejected(t, "function definition");
      if (t.lexeme == "class") rejected(t, "class definition");
      if (t.lexeme == "while") rejected(t, "while-loop");
      if (t.lexeme == "lambda") rejected(t, "lambda");
      if (t.lexeme != "True" && t.lexeme != "False" && t.lexeme != "None") {
        rejected(t, "'" + t.lexeme + "' statement");
      }
    }
    StmtPtr s = simple_statement();
    end_of_statement();
    return s;
  }

  void end_of_statement() {
    if (match(TokenKind::kDelimiter, ";")) {
      if (!check(TokenKind::kNewline)) rejected(toks_[pos_ - 1], "';' statement separator");
    }
    if (!match(TokenKind::kNewline) && !check(TokenKind::kEnd)) expected("end of statement");
  }

  StmtPtr simple_statement() {
    auto s = std::make_unique<Stmt>();
    s->span = peek().span;
    if (check(TokenKind::kIdentifier)) {
      const Token& op = peek(1);
      if (op.kind == TokenKind::kOperator && op.lexeme == "=") {
        s->kind = StmtKind::kAssign;
        s->target = next().lexeme;
        next();
        s->value = expression();
        if (check(TokenKind::kOperator, "=")) rejected(peek(), "chained assignment");
        return s;
      }
      if (op.kind == TokenKind::kOperator && op.lexeme.size() >= 2 && op.lexeme.back() == '=' &&
          op.lexeme != "==" && op.lexeme != "!=" && op.lexeme != "<=" && op.lexeme != ">=") {
        s->kind = StmtKind::kAugAssign;
        s->target = next().lexeme;
        s->op = next().lexeme;
        s->op.pop_back();
        s->value = expression();
        return s;
      }
    }
    s->kind = StmtKind::kExpr;
    s->value = expression();
    if (check(TokenKind::kOperator, "=")) {
      if (check(TokenKind::kOperator, "=") && s->value->kind == ExprKind::kList) {
        rejected(peek(), "tuple unpacking");
      }
      fail(peek().span, "can only assign to a plain name");
    }
    if (check(TokenKind::kDelimiter, ",")) rejected(peek(), "tuple unpacking");
    return s;
  }

  StmtPtr import_statement() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::kImport;
    s->span = peek().span;
    const Token& kw = next();
    if (kw.lexeme == "import") {
      const Token& mod = expect_kind(TokenKind::kIdentifier, "module name");
      if (mod.lexeme != "math") rejected(mod, "import of '" + mod.lexeme + "'");
      if (check(TokenKind::kKeyword, "as")) rejected(peek(), "import alias");
      return s;
    }
    const Token& mod = expect_kind(TokenKind::kIdentifier, "module name");
    if (mod.lexeme != "math" && mod.lexeme != "CADLib") rejected(mod, "import from '" + mod.lexeme + "'");
    expect(TokenKind::kKeyword, "import");
    if (match(TokenKind::kOperator, "*")) return s;
    const bool paren = match(TokenKind::kDelimiter, "(");
    do {
      expect_kind(TokenKind::kIdentifier, "imported name");
      if (check(TokenKind::kKeyword, "as")) rejected(peek(), "import alias");
    } while (match(TokenKind::kDelimiter, ","));
    if (paren) expect(TokenKind::kDelimiter, ")");
    return s;
  }

  StmtPtr for_statement() {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::kFor;
    s->span = next().span;
    DepthGuard guard(*this, s->span);
    s->target = expect_kind(TokenKind::kIdentifier, "loop variable").lexeme;
    if (check(TokenKind::kDelimiter, ",")) rejected(peek(), "tuple loop target");
    expect(TokenKind::kKeyword, "in");
    if (!check(TokenKind::kIdentifier, "range") || peek(1).lexeme != "(") {
      fail(peek().span, "rejected construct: for-loops must iterate over range(...)");
    }
    next();
    next();
    if (check(TokenKind::kDelimiter, ")")) expected("range bound");
    s->range_args.push_back(expression());
    while (match(TokenKind::kDelimiter, ",")) {
      if (check(TokenKind::kDelimiter, ")")) break;
      s->range_args.push_back(expression());
    }
    if (s->range_args.size() > 3) fail(s->span, "range takes at most 3 arguments");
    expect(TokenKind::kDelimiter, ")");
    expect(TokenKind::kDelimiter, ":");
    if (match(TokenKind::kNewline)) {
      if (!match(TokenKind::kIndent)) expected("an indented block");
      while (!match(TokenKind::kDedent)) {
        if (check(TokenKind::kEnd)) expected("dedent");
        if (match(TokenKind::kNewline)) continue;
        s->body.push_back(statement());
      }
    } else {
      if (check(TokenKind::kKeyword, "for")) rejected(peek(), "inline nested for-loop");
      s->body.push_back(simple_statement());
      end_of_statement();
    }
    return s;
  }

  // ---------------------------------------------------------------------
  // Expressions

  ExprPtr make(ExprKind kind, const Span& span) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->span = span;
    return e;
  }

  ExprPtr binary(const Token& op, ExprPtr lhs, ExprPtr rhs) {
    ExprPtr e = make(ExprKind::kBinary, op.span);
    e->text = op.lexeme;
    e->items.push_back(std::move(lhs));
    e->items.push_back(std::move(rhs));
    return e;
  }

  void reject_unsupported_operator() const {
    const Token& t = peek();
    if (t.kind == TokenKind::kOperator) {
      static const char* kBad[] = {"==", "!=", "<", ">", "<=", ">=", "@", "&", "|", "^", "~", "->"};
      for (const char* b : kBad) {
        if (t.lexeme == b) rejected(t, "operator '" + t.lexeme + "'");
      }
    }
    if (t.kind == TokenKind::kKeyword &&
        (t.lexeme == "if" || t.lexeme == "and" || t.lexeme == "or" || t.lexeme == "not" ||
         t.lexeme == "is" || t.lexeme == "in" || t.lexeme == "for" || t.lexeme == "lambda")) {
      rejected(t, "'" + t.lexeme + "' expression");
    }
  }

  ExprPtr expression() {
    DepthGuard guard(*this, peek().span);
    ExprPtr e = additive();
    reject_unsupported_operator();
    return e;
  }

  ExprPtr additive() {
    ChainGuard chain(*this);
    ExprPtr lhs = multiplicative();
    while (check(TokenKind::kOperator, "+") || check(TokenKind::kOperator, "-")) {
      const Token& op = next();
      chain.step(op.span);
      lhs = binary(op, std::move(lhs), multiplicative());
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ChainGuard chain(*this);
    ExprPtr lhs = unary();
    while (check(TokenKind::kOperator, "*") || check(TokenKind::kOperator, "/") ||
           check(TokenKind::kOperator, "//") || check(TokenKind::kOperator, "%")) {
      const Token& op = next();
      chain.step(op.span);
      lhs = binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  ExprPtr unary() {
    if (check(TokenKind::kOperator, "-") || check(TokenKind::kOperator, "+")) {
      const Token& op = next();
      DepthGuard guard(*this, op.span);
      ExprPtr e = make(ExprKind::kUnary, op.span);
      e->text = op.lexeme;
      e->items.push_back(unary());
      return e;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = postfix();
    if (check(TokenKind::kOperator, "**")) {
      const Token& op = next();
      DepthGuard guard(*this, op.span);
      return binary(op, std::move(base), unary());
    }
    return base;
  }

  ExprPtr postfix() {
    ChainGuard chain(*this);
    ExprPtr e = atom();
    for (;;) {
      if (check(TokenKind::kDelimiter, ".") || check(TokenKind::kDelimiter, "(") ||
          check(TokenKind::kDelimiter, "[")) {
        chain.step(peek().span);
      }
      if (check(TokenKind::kDelimiter, ".")) {
        next();
        const Token& name = expect_kind(TokenKind::kIdentifier, "attribute name");
        if (!name.lexeme.empty() && name.lexeme[0] == '_') rejected(name, "private attribute access");
        ExprPtr a = make(ExprKind::kAttribute, name.span);
        a->text = name.lexeme;
        a->items.push_back(std::move(e));
        e = std::move(a);
      } else if (check(TokenKind::kDelimiter, "(")) {
        const Span span = next().span;
        DepthGuard guard(*this, span);
        ExprPtr c = make(ExprKind::kCall, span);
        c->items.push_back(std::move(e));
        arguments(*c);
        e = std::move(c);
      } else if (check(TokenKind::kDelimiter, "[")) {
        const Span span = next().span;
        DepthGuard guard(*this, span);
        ExprPtr s = make(ExprKind::kSubscript, span);
        s->items.push_back(std::move(e));
        if (check(TokenKind::kDelimiter, ":")) rejected(peek(), "slicing");
        s->items.push_back(expression());
        if (check(TokenKind::kDelimiter, ":")) rejected(peek(), "slicing");
        expect(TokenKind::kDelimiter, "]");
        e = std::move(s);
      } else {
        return e;
      }
    }
  }

  void arguments(Expr& call) {
    while (!check(TokenKind::kDelimiter, ")")) {
      if (check(TokenKind::kOperator, "*") || check(TokenKind::kOperator, "**")) {
        rejected(peek(), "argument unpacking");
      }
      if (check(TokenKind::kIdentifier) && peek(1).kind == TokenKind::kOperator && peek(1).lexeme == "=") {
        KeywordArg kw;
        kw.name = next().lexeme;
        next();
        kw.value = expression();
        for (const KeywordArg& other : call.keywords) {
          if (other.name == kw.name) fail(call.span, "repeated keyword argument '" + kw.name + "'");
        }
        call.keywords.push_back(std::move(kw));
      } else {
        if (!call.keywords.empty()) fail(peek().span, "positional argument follows keyword argument");
        call.items.push_back(expression());
      }
      if (!match(TokenKind::kDelimiter, ",")) break;
    }
    expect(TokenKind::kDelimiter, ")");
  }

  ExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kNumber: {
        next();
        ExprPtr e = make(ExprKind::kNumber, t.span);
        e->number = t.number;
        return e;
      }
      case TokenKind::kString: {
        next();
        ExprPtr e = make(ExprKind::kString, t.span);
        e->text = t.lexeme;
        // Adjacent literals concatenate.
        while (check(TokenKind::kString)) e->text += next().lexeme;
        return e;
      }
      case TokenKind::kIdentifier: {
        next();
        ExprPtr e = make(ExprKind::kName, t.span);
        e->text = t.lexeme;
        return e;
      }
      case TokenKind::kKeyword: {
        if (t.lexeme == "True" || t.lexeme == "False") {
          next();
          ExprPtr e = make(ExprKind::kBool, t.span);
          e->flag = t.lexeme == "True";
          return e;
        }
        if (t.lexeme == "None") {
          next();
          return make(ExprKind::kNone, t.span);
        }
        reject_unsupported_operator();
        rejected(t, "'" + t.lexeme + "'");
      }
      case TokenKind::kDelimiter: {
        if (t.lexeme == "(") return sequence(")", true);
        if (t.lexeme == "[") return sequence("]", false);
        if (t.lexeme == "{") rejected(t, "dict or set literal");
        break;
      }
      default:
        break;
    }
    reject_unsupported_operator();
    expected("an expression");
  }

  // Parenthesized expression, tuple or list literal.
  ExprPtr sequence(std::string_view close, bool parenthesized) {
    const Span span = next().span;
    DepthGuard guard(*this, span);
    ExprPtr list = make(ExprKind::kList, span);
    bool trailing_comma = false;
    while (!check(TokenKind::kDelimiter, close)) {
      list->items.push_back(expression());
      if (check(TokenKind::kKeyword, "for")) rejected(peek(), "comprehension");
      trailing_comma = match(TokenKind::kDelimiter, ",");
      if (!trailing_comma) break;
    }
    expect(TokenKind::kDelimiter, close);
    if (parenthesized && list->items.size() == 1 && !trailing_comma) return std::move(list->items[0]);
    return list;
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ScriptAst parse(const std::vector<Token>& tokens) {
  if (tokens.empty() || tokens.back().kind != TokenKind::kEnd) {
    throw Error(ErrorCategory::kParse, "token stream must end with an end-of-input token");
  }
  return Parser(tokens).program();
}

ScriptAst parse_script(std::string_view source) { return parse(tokenize(source)); }

}  // namespace recad::script
