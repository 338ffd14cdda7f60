#include "ineq/poly.hpp"

#include <algorithm>

namespace ineq {

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) {
      c = 1;
    } else if (j == b.size()) {
      c = -1;
    } else {
      c = compare(a[i].first, b[j].first);
    }
    if (c < 0) return a[i].second < 0;  // atom only in a
    if (c > 0) return 0 < b[j].second;  // atom only in b
    if (a[i].second != b[j].second) return a[i].second < b[j].second;
    ++i;
    ++j;
  }
  return false;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? 1 : (j == b.size() ? -1 : compare(a[i].first, b[j].first));
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      Rational e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial monomial_pow(const Monomial& a, const Rational& q) {
  if (q == 0) return {};
  Monomial out = a;
  for (auto& [atom, e] : out) e *= q;
  return out;
}

Expr monomial_expr(const Monomial& m) {
  ExprList fs;
  fs.reserve(m.size());
  for (const auto& [atom, e] : m) fs.push_back(pow(atom, constant(e)));
  return mul(std::move(fs));
}

Rational monomial_degree(const Monomial& m) {
  Rational d = 0;
  for (const auto& [atom, e] : m) {
    if (atom.is_symbol()) d += e;
  }
  return d;
}

Poly poly_constant(const Rational& c) {
  Poly p;
  if (c != 0) p.emplace(Monomial{}, c);
  return p;
}

Poly poly_add(const Poly& a, const Poly& b, const Rational& scale) {
  Poly out = a;
  for (const auto& [m, c] : b) {
    auto [it, inserted] = out.try_emplace(m, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second == 0) out.erase(it);
    }
  }
  return out;
}

Poly poly_scale(const Poly& p, const Rational& c) {
  if (c == 0) return {};
  Poly out;
  for (const auto& [m, v] : p) out.emplace_hint(out.end(), m, v * c);
  return out;
}

Poly poly_mul_monomial(const Poly& p, const Monomial& m, const Rational& c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [pm, v] : p) out.emplace(monomial_mul(pm, m), v * c);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b, std::size_t cap) {
  if (a.size() * b.size() > cap * 8 && a.size() > 1 && b.size() > 1) {
    throw ExpansionLimit("product exceeds the expansion cap");
  }
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = monomial_mul(ma, mb);
      auto [it, inserted] = out.try_emplace(std::move(m), ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
  if (out.size() > cap) throw ExpansionLimit("expansion exceeds the term cap");
  return out;
}

Poly poly_pow(const Poly& a, unsigned long k, std::size_t cap) {
  Poly result = poly_constant(1);
  if (k == 0) return result;
  if (a.size() == 1) {
    const auto& [m, c] = *a.begin();
    Rational ck;
    mpz_pow_ui(ck.get_num_mpz_t(), c.get_num_mpz_t(), k);
    mpz_pow_ui(ck.get_den_mpz_t(), c.get_den_mpz_t(), k);
    ck.canonicalize();
    return {{monomial_pow(m, Rational(static_cast<long>(k))), ck}};
  }
  for (unsigned long i = 0; i < k; ++i) result = poly_mul(result, a, cap);
  return result;
}

namespace {

// Splits an arbitrary factor into (coefficient, atom list) for monomials.
void absorb_factor(const Expr& f, Rational& coeff, Monomial& m) {
  if (f.is_const()) {
    coeff *= f.value();
    return;
  }
  if (f.is_mul()) {
    for (const auto& g : f.operands()) absorb_factor(g, coeff, m);
    return;
  }
  if (f.is_pow() && f.exponent().is_const()) {
    m = monomial_mul(m, Monomial{{f.base(), f.exponent().value()}});
    return;
  }
  m = monomial_mul(m, Monomial{{f, Rational(1)}});
}

Poly single_atom(const Expr& atom, const Rational& e) { return {{Monomial{{atom, e}}, Rational(1)}}; }

Poly monomial_power(const Monomial& m, const Rational& c, const Rational& q) {
  // (c * m)^q for a single-term base; symbols are nonnegative by convention.
  Monomial out = monomial_pow(m, q);
  Rational coeff = 1;
  Expr cq = pow(constant(c), constant(q));
  Monomial extra;
  absorb_factor(cq, coeff, extra);
  return {{monomial_mul(out, extra), coeff}};
}

Poly to_poly_rec(const Expr& e, std::size_t cap);

Poly pow_to_poly(const Expr& base, const Rational& q, std::size_t cap) {
  Poly b = to_poly_rec(base, cap);
  if (b.empty()) {
    if (q < 0) throw DomainError("division by zero");
    return {};
  }
  if (q.get_den() == 1) {
    const Integer& n = q.get_num();
    if (!n.fits_slong_p()) throw ExpansionLimit("exponent too large");
    long k = n.get_si();
    if (k > 0) return poly_pow(b, static_cast<unsigned long>(k), cap);
    if (b.size() == 1) {
      const auto& [m, c] = *b.begin();
      return monomial_power(m, c, q);
    }
    return single_atom(from_poly(poly_pow(b, static_cast<unsigned long>(-k), cap)), Rational(-1));
  }
  if (b.size() == 1 && b.begin()->second > 0) {
    const auto& [m, c] = *b.begin();
    return monomial_power(m, c, q);
  }
  return single_atom(from_poly(b), q);
}

Poly to_poly_rec(const Expr& e, std::size_t cap) {
  switch (e.kind()) {
    case Kind::Const:
      return poly_constant(e.value());
    case Kind::Symbol:
      return single_atom(e, Rational(1));
    case Kind::Add: {
      Poly out;
      for (const auto& t : e.operands()) {
        out = poly_add(out, to_poly_rec(t, cap));
        if (out.size() > cap) throw ExpansionLimit("expansion exceeds the term cap");
      }
      return out;
    }
    case Kind::Mul: {
      auto [coeff, rest] = split_coefficient(e);
      ExprList factors = rest.is_mul() ? rest.operands() : ExprList{rest};
      Poly acc = poly_constant(1);
      Poly den = poly_constant(1);
      bool has_den = false;
      for (const auto& f : factors) {
        if (f.is_pow() && f.exponent().is_integer() && f.exponent().value() < 0) {
          Poly b = to_poly_rec(f.base(), cap);
          if (b.empty()) throw DomainError("division by zero");
          if (b.size() == 1) {
            const auto& [m, c] = *b.begin();
            acc = poly_mul(acc, monomial_power(m, c, f.exponent().value()), cap);
          } else {
            long k = -f.exponent().value().get_num().get_si();
            den = poly_mul(den, poly_pow(b, static_cast<unsigned long>(k), cap), cap);
            has_den = true;
          }
        } else {
          acc = poly_mul(acc, to_poly_rec(f, cap), cap);
        }
      }
      if (!has_den) return poly_scale(acc, coeff);
      // Like a computer-algebra expand: the coefficient's denominator joins
      // the expanded reciprocal factor.
      den = poly_scale(den, Rational(coeff.get_den()));
      Poly inv = single_atom(from_poly(den), Rational(-1));
      return poly_mul(poly_scale(acc, Rational(coeff.get_num())), inv, cap);
    }
    case Kind::Pow: {
      if (e.exponent().is_const()) return pow_to_poly(e.base(), e.exponent().value(), cap);
      return single_atom(e, Rational(1));
    }
  }
  return {};
}

}  // namespace

Poly to_poly(const Expr& e, std::size_t cap) { return to_poly_rec(e, cap); }

Expr from_poly(const Poly& p) {
  ExprList terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) {
    ExprList fs{constant(c)};
    for (const auto& [atom, x] : m) fs.push_back(pow(atom, constant(x)));
    terms.push_back(mul(std::move(fs)));
  }
  return add(std::move(terms));
}

Expr expand(const Expr& e, std::size_t cap) { return from_poly(to_poly(e, cap)); }

Rational poly_content(const Poly& p) {
  if (p.empty()) return 1;
  Integer g = 0;
  Integer l = 1;
  for (const auto& [m, c] : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational out(g, l);
  out.canonicalize();
  return out;
}

Monomial poly_monomial_gcd(const Poly& p) {
  if (p.empty()) return {};
  std::map<Expr, Rational, ExprLess> mins;
  bool first = true;
  for (const auto& [m, c] : p) {
    std::map<Expr, Rational, ExprLess> here;
    for (const auto& [atom, e] : m) {
      if (atom.is_symbol()) here[atom] = e;
    }
    if (first) {
      mins = here;
      first = false;
      continue;
    }
    for (auto it = mins.begin(); it != mins.end();) {
      auto h = here.find(it->first);
      if (h == here.end()) {
        it = mins.erase(it);
      } else {
        it->second = std::min(it->second, h->second);
        ++it;
      }
    }
  }
  Monomial out;
  for (const auto& [atom, e] : mins) {
    if (e > 0) out.emplace_back(atom, e);
  }
  return out;
}

std::optional<Poly> poly_divide_exact(const Poly& num, const Poly& den) {
  if (den.empty()) return std::nullopt;
  Poly rem = num;
  Poly quot;
  const auto& [lm, lc] = *den.rbegin();
  std::size_t guard = 0;
  while (!rem.empty()) {
    if (++guard > 20000) return std::nullopt;
    const auto& [rm, rc] = *rem.rbegin();
    Monomial t = monomial_mul(rm, monomial_pow(lm, Rational(-1)));
    for (const auto& [atom, e] : t) {
      if (e < 0) return std::nullopt;
    }
    Rational tc = rc / lc;
    quot = poly_add(quot, Poly{{t, tc}});
    rem = poly_add(rem, poly_mul_monomial(den, t, tc), Rational(-1));
  }
  return quot;
}

bool is_plain_polynomial(const Poly& p) {
  for (const auto& [m, c] : p) {
    for (const auto& [atom, e] : m) {
      if (!atom.is_symbol() || e.get_den() != 1 || e < 0) return false;
    }
  }
  return true;
}

std::optional<Poly> poly_root(const Poly& p, unsigned long k) {
  if (k == 1) return p;
  if (p.empty()) return Poly{};
  const auto& [lm, lc] = *p.rbegin();
  if (lc <= 0 && k % 2 == 0) return std::nullopt;
  // Leading term of the root.
  Expr lc_root = pow(constant(lc), constant(Rational(1, static_cast<long>(k))));
  if (!lc_root.is_const()) return std::nullopt;
  Monomial lroot = monomial_pow(lm, Rational(1, static_cast<long>(k)));
  for (const auto& [atom, e] : lroot) {
    if (e.get_den() != 1) return std::nullopt;
  }
  Poly q{{lroot, lc_root.value()}};
  // Denominator of the Newton-like step: k * lt(q)^(k-1).
  Monomial step_m = monomial_pow(lroot, Rational(static_cast<long>(k) - 1));
  Rational step_c = Rational(static_cast<long>(k));
  {
    Rational cpow = 1;
    for (unsigned long i = 0; i + 1 < k; ++i) cpow *= lc_root.value();
    step_c *= cpow;
  }
  for (std::size_t iter = 0; iter <= p.size() + 1; ++iter) {
    Poly diff = poly_add(p, poly_pow(q, k), Rational(-1));
    if (diff.empty()) return q;
    const auto& [dm, dc] = *diff.rbegin();
    Monomial t = monomial_mul(dm, monomial_pow(step_m, Rational(-1)));
    for (const auto& [atom, e] : t) {
      if (e < 0 || e.get_den() != 1) return std::nullopt;
    }
    if (!MonomialLess{}(t, lroot)) return std::nullopt;
    q = poly_add(q, Poly{{t, dc / step_c}});
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// together

namespace {

struct DenFactor {
  Expr base;
  Rational exponent;
};

// Denominator bookkeeping: symbol powers and primitive polynomial bases.
using DenMap = std::map<Expr, Rational, ExprLess>;

// Normalizes an expanded polynomial base to content * monomial * primitive,
// choosing the sign of the primitive part so that its leading coefficient is
// positive.
struct Factored {
  Rational content;
  Monomial mono;
  Poly primitive;
};

Factored factor_poly(const Poly& p) {
  Factored f;
  f.content = poly_content(p);
  f.mono = poly_monomial_gcd(p);
  Poly prim = poly_mul_monomial(p, monomial_pow(f.mono, Rational(-1)), 1 / f.content);
  if (!prim.empty() && prim.rbegin()->second < 0) {
    f.content = -f.content;
    prim = poly_scale(prim, Rational(-1));
  }
  f.primitive = std::move(prim);
  return f;
}

struct TermParts {
  Rational coeff = 1;
  Poly num = poly_constant(1);
  DenMap den;
};

void add_den(DenMap& den, const Expr& base, const Rational& e) {
  auto [it, inserted] = den.try_emplace(base, e);
  if (!inserted) it->second += e;
}

TermParts split_term(const Expr& t, std::size_t cap) {
  TermParts parts;
  auto [c, rest] = split_coefficient(t);
  parts.coeff = c;
  ExprList factors = rest.is_mul() ? rest.operands() : ExprList{rest};
  ExprList numer;
  for (const auto& f : factors) {
    if (f.is_one()) continue;
    if (!(f.is_pow() && f.exponent().is_const() && f.exponent().value() < 0)) {
      numer.push_back(f);
      continue;
    }
    const Expr& b = f.base();
    Rational k = -f.exponent().value();
    if (b.is_symbol()) {
      add_den(parts.den, b, k);
      continue;
    }
    if (k.get_den() != 1) {
      add_den(parts.den, b, k);
      continue;
    }
    Factored fb = factor_poly(to_poly(b, cap));
    if (fb.primitive.empty()) throw DomainError("division by zero");
    long kk = k.get_num().get_si();
    Rational ck = 1;
    for (long i = 0; i < kk; ++i) ck *= fb.content;
    parts.coeff /= ck;
    for (const auto& [atom, e] : fb.mono) add_den(parts.den, atom, e * k);
    Expr prim = from_poly(fb.primitive);
    if (!prim.is_one()) {
      if (fb.primitive.size() == 1) {
        // A lone non-symbol atom (e.g. a radical) stays a plain reciprocal.
        Rational cc = 1;
        Monomial mm;
        absorb_factor(prim, cc, mm);
        for (const auto& [atom, e] : mm) add_den(parts.den, atom, e * k);
      } else {
        add_den(parts.den, prim, k);
      }
    }
  }
  parts.num = to_poly(mul(numer), cap);
  return parts;
}

Expr combine_sum(const ExprList& terms, std::size_t cap) {
  std::vector<TermParts> parts;
  parts.reserve(terms.size());
  bool any_den = false;
  bool fractional_coeff = false;
  for (const auto& t : terms) {
    parts.push_back(split_term(t, cap));
    any_den = any_den || !parts.back().den.empty();
    fractional_coeff = fractional_coeff || parts.back().coeff.get_den() != 1;
  }
  if (!any_den && !fractional_coeff) return add(terms);

  DenMap lcm;
  for (const auto& p : parts) {
    for (const auto& [b, e] : p.den) {
      auto [it, inserted] = lcm.try_emplace(b, e);
      if (!inserted) it->second = std::max(it->second, e);
    }
  }
  Poly num;
  for (const auto& p : parts) {
    Monomial mult;
    for (const auto& [b, e] : lcm) {
      auto it = p.den.find(b);
      Rational have = it == p.den.end() ? Rational(0) : it->second;
      if (e != have) mult = monomial_mul(mult, Monomial{{b, e - have}});
    }
    // Non-symbol multipliers with integer exponents must be expanded so the
    // numerator is a genuine polynomial in the atoms.
    Poly mp = poly_constant(1);
    Monomial plain;
    for (const auto& [b, e] : mult) {
      if (!b.is_symbol() && e.get_den() == 1) {
        mp = poly_mul(mp, poly_pow(to_poly(b, cap), e.get_num().get_ui(), cap), cap);
      } else {
        plain = monomial_mul(plain, Monomial{{b, e}});
      }
    }
    Poly contrib = poly_mul(poly_mul_monomial(p.num, plain, p.coeff), mp, cap);
    num = poly_add(num, contrib);
    if (num.size() > cap) throw ExpansionLimit("together exceeds the term cap");
  }
  if (num.empty()) return integer(0);

  // Cancel content, monomials and shared primitive factors.
  Factored fn = factor_poly(num);
  Rational coeff = fn.content;
  Monomial nm = fn.mono;
  Poly prim = fn.primitive;
  for (auto& [b, e] : lcm) {
    if (!b.is_symbol()) continue;
    for (auto& [atom, x] : nm) {
      if (atom == b && x > 0 && e > 0) {
        Rational m = std::min(x, e);
        x -= m;
        e -= m;
      }
    }
  }
  for (auto& [b, e] : lcm) {
    if (b.is_symbol() || e.get_den() != 1) continue;
    if (e <= 0) continue;
    Poly bp = to_poly(b, cap);
    while (e > 0 && prim.size() >= bp.size()) {
      auto q = poly_divide_exact(prim, bp);
      if (!q) break;
      prim = std::move(*q);
      e -= 1;
    }
  }
  ExprList fs{constant(coeff), from_poly(prim)};
  for (const auto& [atom, x] : nm) {
    if (x != 0) fs.push_back(pow(atom, constant(x)));
  }
  for (const auto& [b, e] : lcm) {
    if (e != 0) fs.push_back(pow(b, constant(-e)));
  }
  return mul(std::move(fs));
}

Expr together_rec(const Expr& e, std::size_t cap) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Symbol:
      return e;
    case Kind::Pow:
      return pow(together_rec(e.base(), cap), together_rec(e.exponent(), cap));
    case Kind::Mul: {
      ExprList ops;
      for (const auto& f : e.operands()) ops.push_back(together_rec(f, cap));
      return mul(std::move(ops));
    }
    case Kind::Add: {
      ExprList ops;
      for (const auto& t : e.operands()) ops.push_back(together_rec(t, cap));
      return combine_sum(ops, cap);
    }
  }
  return e;
}

}  // namespace

Expr together(const Expr& e, std::size_t cap) { return together_rec(e, cap); }

bool is_identically_zero(const Expr& e, std::size_t cap) {
  if (e.is_zero()) return true;
  Expr t = together(e, cap);
  if (t.is_zero()) return true;
  return to_poly(t, cap).empty();
}

}  // namespace ineq
