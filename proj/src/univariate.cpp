#include "ineq/univariate.hpp"

#include <cmath>

#include "ineq/calculus.hpp"
#include "ineq/poly.hpp"

namespace ineq {

namespace {

void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

}  // namespace

UPoly::UPoly(std::vector<Rational> c) : coef(std::move(c)) { trim(coef); }

UPoly UPoly::constant(const Rational& c) { return UPoly({c}); }

UPoly UPoly::x() { return UPoly({Rational(0), Rational(1)}); }

Rational UPoly::operator()(const Rational& at) const {
  Rational acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * at + *it;
  return acc;
}

long double UPoly::eval(long double at) const {
  long double acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * at + it->get_d();
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < coef.size(); ++i) d.push_back(coef[i] * Rational(static_cast<long>(i)));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  Rational l = lead();
  std::vector<Rational> c = coef;
  for (auto& v : c) v /= l;
  return UPoly(std::move(c));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.coef.size(), b.coef.size()));
  for (std::size_t i = 0; i < a.coef.size(); ++i) c[i] += a.coef[i];
  for (std::size_t i = 0; i < b.coef.size(); ++i) c[i] += b.coef[i];
  return UPoly(std::move(c));
}

UPoly operator*(const Rational& s, const UPoly& a) {
  std::vector<Rational> c = a.coef;
  for (auto& v : c) v *= s;
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + Rational(-1) * b; }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.coef.size() + b.coef.size() - 1);
  for (std::size_t i = 0; i < a.coef.size(); ++i) {
    for (std::size_t j = 0; j < b.coef.size(); ++j) c[i + j] += a.coef[i] * b.coef[j];
  }
  return UPoly(std::move(c));
}

bool operator==(const UPoly& a, const UPoly& b) { return a.coef == b.coef; }

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> r = a.coef;
  int db = b.degree();
  std::vector<Rational> q(std::max(0, a.degree() - db + 1));
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rational f = r[i] / b.lead();
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.coef[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<UPoly> square_free_factors(const UPoly& f) {
  std::vector<UPoly> out;
  if (f.degree() <= 0) return out;
  UPoly fp = f.derivative();
  UPoly a = gcd(f, fp);
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(fp, a).first;
  UPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly ai = gcd(b, d);
    out.push_back(ai);
    b = divmod(b, ai).first;
    c = divmod(d, ai).first;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  for (auto& p : out) p = p.monic();
  return out;
}

namespace {

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    UPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(Rational(-1) * r);
  }
  return chain;
}

// Sign variations of the chain at a point; nullopt point means the infinity
// of the given direction (+1 or -1).
int variations(const std::vector<UPoly>& chain, const std::optional<Rational>& at, int inf_dir) {
  int count = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s;
    if (at) {
      s = sgn(q(*at));
    } else {
      s = sgn(q.lead());
      if (inf_dir < 0 && q.degree() % 2 == 1) s = -s;
    }
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

std::size_t count_roots(const UPoly& p, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  if (p.degree() <= 0) return 0;
  // Sturm's theorem needs a square-free input.
  UPoly g = gcd(p, p.derivative());
  UPoly sf = divmod(p, g).first;
  auto chain = sturm_chain(sf);
  int vlo = variations(chain, lo, -1);
  int vhi = variations(chain, hi, +1);
  return static_cast<std::size_t>(std::max(0, vlo - vhi));
}

namespace {

using RatFn = std::pair<UPoly, UPoly>;

RatFn normalize(RatFn f) {
  UPoly g = gcd(f.first, f.second);
  if (g.degree() > 0) {
    f.first = divmod(f.first, g).first;
    f.second = divmod(f.second, g).first;
  }
  Rational l = f.second.lead();
  if (l != 1) {
    f.first = Rational(1) / l * f.first;
    f.second = Rational(1) / l * f.second;
  }
  return f;
}

std::optional<RatFn> convert(const Expr& e, const std::string& x) {
  switch (e.kind()) {
    case Kind::Const:
      return RatFn{UPoly::constant(e.value()), UPoly::constant(1)};
    case Kind::Symbol:
      if (e.name() != x) return std::nullopt;
      return RatFn{UPoly::x(), UPoly::constant(1)};
    case Kind::Add: {
      RatFn acc{UPoly(), UPoly::constant(1)};
      for (const auto& t : e.operands()) {
        auto r = convert(t, x);
        if (!r) return std::nullopt;
        acc = normalize({acc.first * r->second + r->first * acc.second, acc.second * r->second});
      }
      return acc;
    }
    case Kind::Mul: {
      RatFn acc{UPoly::constant(1), UPoly::constant(1)};
      for (const auto& f : e.operands()) {
        auto r = convert(f, x);
        if (!r) return std::nullopt;
        acc = normalize({acc.first * r->first, acc.second * r->second});
      }
      return acc;
    }
    case Kind::Pow: {
      const Expr& q = e.exponent();
      if (!q.is_const() || q.value().get_den() != 1) return std::nullopt;
      if (!q.value().get_num().fits_slong_p()) return std::nullopt;
      long k = q.value().get_num().get_si();
      auto b = convert(e.base(), x);
      if (!b) return std::nullopt;
      if (k < 0) {
        if (b->first.is_zero()) throw DomainError("zero to a negative power");
        std::swap(b->first, b->second);
        k = -k;
      }
      RatFn acc{UPoly::constant(1), UPoly::constant(1)};
      for (long i = 0; i < k; ++i) acc = {acc.first * b->first, acc.second * b->second};
      return normalize(acc);
    }
  }
  return std::nullopt;
}

// A rational point strictly inside the interval, varied by `k`.
Rational interior_point(const Interval& d, int k) {
  Rational t(k + 1, k + 2);
  if (d.lo && d.hi) return *d.lo + (*d.hi - *d.lo) * t / 2 + (*d.hi - *d.lo) * Rational(k % 3, 7);
  if (d.lo) return *d.lo + Rational(k + 1, 3);
  if (d.hi) return *d.hi - Rational(k + 1, 3);
  return Rational(k - 2, 3);
}

bool inside(const Interval& d, const Rational& v) {
  return (!d.lo || v > *d.lo) && (!d.hi || v < *d.hi);
}

// Roots of p strictly inside the open interval.
std::size_t roots_inside(const UPoly& p, const Interval& d) {
  std::size_t n = count_roots(p, d.lo, d.hi);
  if (n > 0 && d.hi && p(*d.hi) == 0) --n;
  return n;
}

}  // namespace

std::optional<std::pair<UPoly, UPoly>> as_rational_function(const Expr& e, const std::string& x) {
  try {
    return convert(e, x);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

Expr to_expr(const UPoly& p, const std::string& x) {
  ExprList terms;
  Expr v = symbol(x);
  for (std::size_t i = 0; i < p.coef.size(); ++i) {
    if (p.coef[i] == 0) continue;
    terms.push_back(mul({constant(p.coef[i]), pow(v, static_cast<long>(i))}));
  }
  return add(std::move(terms));
}

Verdict one_var_check(const Expr& lhs, const Expr& rhs, const std::string& x, const Interval& domain) {
  auto f = as_rational_function(rhs - lhs, x);
  if (!f) return Verdict::Undecided;
  const UPoly& num = f->first;
  const UPoly& den = f->second;
  if (num.is_zero()) return Verdict::True;
  // A pole inside the domain means the statement is not meaningful there.
  if (den.degree() > 0 && roots_inside(den, domain) > 0) return Verdict::False;
  UPoly p = num * den;
  // p may only touch zero at even-multiplicity roots.
  auto factors = square_free_factors(p);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if ((i + 1) % 2 == 1 && roots_inside(factors[i], domain) > 0) return Verdict::False;
  }
  for (int k = 0; k < 16; ++k) {
    Rational t = interior_point(domain, k);
    if (!inside(domain, t)) continue;
    Rational v = p(t);
    if (v != 0) return v > 0 ? Verdict::True : Verdict::False;
  }
  return Verdict::Undecided;
}

std::optional<TangentBound> tangent_line_check(const Expr& f, const std::string& x, const Interval& domain,
                                               const Rational& x0) {
  std::map<std::string, Expr> at{{x, constant(x0)}};
  Expr f0;
  Expr f1;
  try {
    f0 = substitute(f, at);
    f1 = substitute(differentiate(f, x), at);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!f0.is_const() || !f1.is_const()) return std::nullopt;
  Expr line = constant(f0.value() - f1.value() * x0) + constant(f1.value()) * symbol(x);
  for (bool upper : {true, false}) {
    Verdict v = upper ? one_var_check(f, line, x, domain) : one_var_check(line, f, x, domain);
    if (v == Verdict::True) {
      TangentBound out;
      out.line = line;
      out.upper = upper;
      out.certificate = together(f - line);
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace ineq
