#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mvlc/errors.hpp"

namespace mvlc {

// AST for the scalar expression language used in metric spec files.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          right-associative
//   primary:= number | variable | func '(' expr ')' | '(' expr ')'
//
// Functions: exp log sqrt sin cos sinh cosh abs (arity 1).
// '^' binds tighter than unary minus, so -x^2 parses as -(x^2).

enum class ExprKind { Number, Variable, Unary, Binary, Call };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  double number = 0.0;        // Number
  std::string name;           // Variable or Call function name
  char op = 0;                // Binary: + - * / ^ ; Unary: -
  ExprPtr lhs;                // Binary lhs, Unary/Call operand
  ExprPtr rhs;                // Binary rhs
  int line = 0, column = 0;   // source position of the defining token
};

bool expr_equal(const Expr& a, const Expr& b);

using Bindings = std::map<std::string, double>;

// Parses `source` against a declared variable list. Unknown identifiers,
// wrong arity and syntax errors throw ParseError with position.
ExprPtr parse_expr(const std::string& source,
                   const std::vector<std::string>& variables);

// IEEE double evaluation. Unbound variables, log/sqrt of a negative,
// non-integer powers of a non-positive base, and non-finite results throw.
double eval_expr(const Expr& e, const Bindings& bindings);

// Canonical text form; parse(print(e)) is structurally equal to e.
std::string print_expr(const Expr& e);

// Convenience: all free variables referenced in the AST.
std::vector<std::string> expr_variables(const Expr& e);

}  // namespace mvlc
