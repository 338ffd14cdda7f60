#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ineq/expr.hpp"

namespace ineq {

/// Dense univariate polynomial over the rationals; coef[i] multiplies x^i.
/// The representation is kept trimmed (no trailing zero coefficients).
struct UPoly {
  std::vector<Rational> coef;

  UPoly() = default;
  explicit UPoly(std::vector<Rational> c);
  static UPoly constant(const Rational& c);
  static UPoly x();

  int degree() const { return static_cast<int>(coef.size()) - 1; }  // -1 for zero
  bool is_zero() const { return coef.empty(); }
  const Rational& lead() const { return coef.back(); }
  Rational operator()(const Rational& at) const;
  long double eval(long double at) const;
  UPoly derivative() const;
  UPoly monic() const;
};

UPoly operator+(const UPoly& a, const UPoly& b);
UPoly operator-(const UPoly& a, const UPoly& b);
UPoly operator*(const UPoly& a, const UPoly& b);
UPoly operator*(const Rational& s, const UPoly& a);
bool operator==(const UPoly& a, const UPoly& b);

/// Euclidean division: a = q*b + r with deg r < deg b.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);  // monic

/// Yun's square-free factorization: f = lc * prod factors[i]^(i+1).
std::vector<UPoly> square_free_factors(const UPoly& f);

/// Number of distinct real roots in the half-open interval (lo, hi];
/// a missing bound stands for infinity.
std::size_t count_roots(const UPoly& p, const std::optional<Rational>& lo, const std::optional<Rational>& hi);

/// Numerator/denominator of a rational function of `x`; nullopt when `e`
/// involves other symbols or non-integer powers of non-constants.
std::optional<std::pair<UPoly, UPoly>> as_rational_function(const Expr& e, const std::string& x);

Expr to_expr(const UPoly& p, const std::string& x);

/// Open interval (lo, hi); missing bounds are infinite.
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

enum class Verdict { True, False, Undecided };

/// Decides lhs <= rhs for every x in the open interval. Exact for rational
/// functions; anything else is Undecided. Never reports True unsoundly.
Verdict one_var_check(const Expr& lhs, const Expr& rhs, const std::string& x, const Interval& domain);

/// Tangent line l(x) = f(x0) + f'(x0)(x - x0) with the direction certified
/// on the domain: `upper` means f <= l there.
struct TangentBound {
  Expr line;
  bool upper = true;
  Expr certificate;  // f - l in combined form
};

std::optional<TangentBound> tangent_line_check(const Expr& f, const std::string& x, const Interval& domain,
                                               const Rational& x0);

}  // namespace ineq
