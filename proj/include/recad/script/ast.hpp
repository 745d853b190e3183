#pragma once

// Syntax tree and parser for the CAD scripting language.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "recad/script/lexer.hpp"

namespace recad::script {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct KeywordArg {
  std::string name;
  ExprPtr value;
};

enum class ExprKind {
  kNumber,     // number
  kString,     // text
  kBool,       // flag
  kNone,
  kName,       // text
  kList,       // items; tuple literals are lists too
  kUnary,      // op, items[0]
  kBinary,     // op, items[0], items[1]
  kAttribute,  // items[0].text
  kCall,       // items[0](items[1..], keywords)
  kSubscript,  // items[0][items[1]]
};

struct Expr {
  ExprKind kind = ExprKind::kNone;
  Span span;
  double number = 0.0;
  bool flag = false;
  std::string text;  // string value, identifier, attribute name or operator
  std::vector<ExprPtr> items;
  std::vector<KeywordArg> keywords;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class StmtKind {
  kAssign,     // target = value
  kAugAssign,  // target op= value
  kExpr,       // value
  kFor,        // for target in range(range_args): body
  kImport,     // accepted imports are no-ops
};

struct Stmt {
  StmtKind kind = StmtKind::kExpr;
  Span span;
  std::string target;
  std::string op;  // "+", "-", ... for kAugAssign
  ExprPtr value;
  std::vector<ExprPtr> range_args;
  std::vector<StmtPtr> body;
};

struct ScriptAst {
  std::vector<StmtPtr> statements;
};

/// Builds the syntax tree. Throws Error{kParse}: syntax errors name the
/// expected token, and constructs outside the grammar (function or class
/// definitions, while-loops, conditionals, non-whitelisted imports, private
/// attributes, ...) are reported as rejected constructs.
ScriptAst parse(const std::vector<Token>& tokens);

/// tokenize followed by parse.
ScriptAst parse_script(std::string_view source);

}  // namespace recad::script
