#pragma once

#include <stdexcept>
#include <string>

#include "qqm/term.hpp"
#include "qqm/types.hpp"

namespace qqm {

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, Span where) : std::runtime_error(msg + " at " + where.str()), span(where) {}
  Span span;
};

/// Grammar (whitespace-insensitive except where noted):
///
///   term  ::= '\' x [':' type] '.' term | 'let' x [':' type] 'be' term 'in' term | app
///   app   ::= atom atom*
///   atom  ::= number | x | prim '(' term,* ')' | prim '[' number ']' '(' term,* ')'
///           | 'fst' '(' term ')' | 'snd' '(' term ')' | '<' term ',' term '>' | '(' term ')'
///   type  ::= prod ('->' type)?        prod ::= base ('*' base)*      base ::= 'Real' | '(' type ')'
///
/// A primitive application is an identifier immediately followed by '(' or
/// '['. A variable applied to a parenthesised argument needs a space: f (x).
/// 'λ', '=>' and '×' are accepted for '\', '->' and '*'.
Term parseTerm(const std::string& source);
SimpleType parseType(const std::string& source);

}  // namespace qqm
