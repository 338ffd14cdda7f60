#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ineq/expr.hpp"

namespace ineq {

using Real = long double;

/// Numeric values for the free symbols of an expression.
using Assignment = std::map<std::string, Real>;

class MissingSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates in extended precision. Odd roots of negative numbers take the
/// real branch; zero denominators and even roots of negatives raise
/// DomainError.
Real evaluate(const Expr& e, const Assignment& at);

/// Simultaneous substitution of symbols; the result is canonical.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& map);

Expr differentiate(const Expr& e, const std::string& s);

/// Image of `e` under the symbol rotation vars[i] -> vars[(i + shift) % n].
Expr rotate(const Expr& e, const std::vector<std::string>& vars, std::size_t shift = 1);

/// Sum of `e` over all cyclic rotations of `vars`.
Expr cyclic_sum(const Expr& e, const std::vector<std::string>& vars);

/// True when rotating `vars` one step leaves the canonical form unchanged.
bool is_cyclic_symmetric(const Expr& e, const std::vector<std::string>& vars);

/// Total degree when `e` is homogeneous in the given symbols (others are
/// treated as constants); nullopt otherwise.
std::optional<Rational> homogeneous_degree(const Expr& e);

/// Multiplies a constant into an Add term by term (one level).
Expr distribute(const Rational& c, const Expr& e);

/// Sorted symbol names of `e`.
std::vector<std::string> symbol_list(const Expr& e);

}  // namespace ineq
