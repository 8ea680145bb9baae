#pragma once

// Arithmetic expressions in one variable x over Q, for black-box functions
// such as "3^x" or "(x^p - x)/p". Grammar:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := integer | name | '(' expr ')' | 'choose(' expr ',' expr ')'
//
// Exponents and the second argument of choose must evaluate to integers.

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "numa/coeff.hpp"

namespace numa {

class Expression {
 public:
  /// `constants` binds names other than x. Throws InvalidArgument on syntax
  /// errors and unknown names.
  static Expression parse(std::string_view text, const std::map<std::string, Rational>& constants = {});

  Rational operator()(const Rational& x) const;
  /// Throws NotNumerical at the first x where the value is not an integer.
  UnaryIntegerFunction integer_function() const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace numa
