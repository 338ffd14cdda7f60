#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ineq/expr.hpp"

namespace ineq {

enum class Relation { Le, Lt, Ge, Gt, Eq };

const char* relation_text(Relation r);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Parses the problem grammar: integers, `p/q`, symbols `[a-z][a-z0-9_]*`,
/// `+ - * / ^`, `sqrt(x)` and parentheses. `^` binds tighter than unary
/// minus, which binds tighter than `*` and `/`.
Expr parse(std::string_view text);

struct ParsedRelation {
  Expr lhs;
  Relation relation;
  Expr rhs;
};

/// Parses `lhs <op> rhs` where op is one of `<= >= < > =`.
ParsedRelation parse_relation(std::string_view text);

enum class Style { Plain, Latex };

/// Plain renderings re-parse to a structurally equal expression.
std::string render(const Expr& e, Style style = Style::Plain);

/// Length of the plain rendering.
std::size_t string_length(const Expr& e);

}  // namespace ineq
