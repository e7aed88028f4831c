#pragma once

// Amplitude expressions over complex literals and the symbols p and s.
//
// Grammar (whitespace ignored):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'i' | 'p' | 's' | '(' expr ')'
//   number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits] ['i']
//
// "3i" and "i" are imaginary literals; a complex constant is written as a sum
// such as "(1+2i)". Binary operators are left-associative.

#include <memory>
#include <string>
#include <string_view>

#include "qbf/amplitude_field.hpp"

namespace qbf {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, P, S, Neg, Add, Sub, Mul, Div };

  Kind kind = Kind::Number;
  cplx value{};  // Number only
  ExprPtr lhs;   // Neg operand or left operand
  ExprPtr rhs;
};

ExprPtr number(cplx value);
ExprPtr sym_p();
ExprPtr sym_s();
ExprPtr neg(ExprPtr x);
ExprPtr binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs);

// Throws ParseError (with a character position) or UnknownSymbolError.
ExprPtr parse_expression(std::string_view text);

// Canonical text with the fewest parentheses that preserve the tree. Numbers
// print with 17 significant digits; literals the parser cannot produce as a
// single token (negative or general complex values) print as a parenthesized
// sum, which parses back to an equal value but a different tree.
std::string print_expression(const ExprPtr& e);

bool structurally_equal(const ExprPtr& x, const ExprPtr& y);
int depth(const ExprPtr& e);

// Element of M denoted by the expression; DomainError on division by zero.
FieldElement to_field(const ExprPtr& e);

// Direct floating evaluation with s = sqrt(p/(1-p)), independent of M.
cplx eval_expression(const ExprPtr& e, double p);

// Expression for a field element, each polynomial in Horner form.
ExprPtr from_field(const FieldElement& x);

}  // namespace qbf
