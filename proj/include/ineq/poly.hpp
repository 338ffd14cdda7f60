#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ineq/expr.hpp"

namespace ineq {

/// Raised when an expansion would exceed its term cap. Search treats it as
/// "skip this branch", never as a failure of the whole run.
class ExpansionLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultTermCap = 5000;

/// Generalized monomial: product of atoms raised to rational powers. Atoms
/// are symbols or non-polynomial leaves such as the radicand of a square
/// root or an irreducible denominator. Entries are sorted by atom and carry
/// nonzero exponents.
using Monomial = std::vector<std::pair<Expr, Rational>>;

/// Lexicographic order with atoms compared by the canonical order (earlier
/// atoms are more significant); a monomial order for nonnegative exponents.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

Monomial monomial_mul(const Monomial& a, const Monomial& b);
Monomial monomial_pow(const Monomial& a, const Rational& q);
Expr monomial_expr(const Monomial& m);

Poly poly_add(const Poly& a, const Poly& b, const Rational& scale = 1);
Poly poly_mul(const Poly& a, const Poly& b, std::size_t cap = kDefaultTermCap);
Poly poly_pow(const Poly& a, unsigned long k, std::size_t cap = kDefaultTermCap);
Poly poly_constant(const Rational& c);

/// Fully distributed form of `e` (deeply, including radicands).
Poly to_poly(const Expr& e, std::size_t cap = kDefaultTermCap);
Expr from_poly(const Poly& p);

/// Distributes products and positive integer powers; denominators with
/// several terms are expanded and kept as a single reciprocal factor.
Expr expand(const Expr& e, std::size_t cap = kDefaultTermCap);

/// Combines sums of fractions into one fraction (recursively), cancelling
/// common content, common monomials and shared polynomial factors.
Expr together(const Expr& e, std::size_t cap = kDefaultTermCap);

/// Exact test for e == 0 as a rational function of its atoms.
bool is_identically_zero(const Expr& e, std::size_t cap = kDefaultTermCap);

/// Positive rational g with p / g having coprime integer coefficients.
Rational poly_content(const Poly& p);

/// Minimum exponent of each symbol atom over all terms (only positive ones).
Monomial poly_monomial_gcd(const Poly& p);

Poly poly_scale(const Poly& p, const Rational& c);
Poly poly_mul_monomial(const Poly& p, const Monomial& m, const Rational& c = 1);

/// Quotient when `den` divides `num` exactly, nullopt otherwise.
std::optional<Poly> poly_divide_exact(const Poly& num, const Poly& den);

/// q with q^k == p when such a polynomial exists (leading coefficient > 0).
std::optional<Poly> poly_root(const Poly& p, unsigned long k);

/// True when every atom of every monomial is a symbol with an integer exponent.
bool is_plain_polynomial(const Poly& p);

/// Total degree of a monomial counting symbol atoms only.
Rational monomial_degree(const Monomial& m);

}  // namespace ineq
