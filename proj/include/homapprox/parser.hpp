#pragma once

#include <string_view>

#include "homapprox/expr.hpp"

namespace homapprox {

// Parses an expression in t, x1..x{dimension}.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?
//   primary := number | 't' | 'x' index | ('sin' | 'cos' | 'exp') '(' expr ')' | '(' expr ')'
//
// Numbers are integers or decimals, converted exactly; "p/q" of two literals
// folds into a single rational constant. Unary minus on a literal folds into
// a negative constant. Implicit multiplication is rejected.
// Throws ParseError carrying the character offset of the problem.
Expr parse_expr(std::string_view text, int dimension);

}  // namespace homapprox
