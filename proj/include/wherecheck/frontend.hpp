#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "wherecheck/ast.hpp"
#include "wherecheck/policy.hpp"

namespace wherecheck {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Grammar (';' is right-nested, a trailing ';' is allowed, '#' starts a comment):
//
//   seq  ::= cmd (';' cmd)* [';']
//   cmd  ::= skip | x := e | x := declass(e) | input(x, ch) | output(e, ch)
//          | if e then seq else seq fi | while e do seq od
//   e    ::= e '|' e | e '&' e | e (== | !=) e | e (< | <=) e
//          | e (+ | -) e | e '*' e | n | x | '(' e ')'
Program parse_program(std::string_view text);
ExprPtr parse_expression(std::string_view text);

// Line-oriented policy text:
//
//   lattice: L < M, M < H      (reflexive-transitive closure is taken)
//   var NAME : LEVEL
//   channel NAME : LEVEL input|output [length N]
//   # comment
Policy parse_policy(std::string_view text);

} // namespace wherecheck
