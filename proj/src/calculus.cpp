#include "ineq/calculus.hpp"

#include <cmath>
#include <unordered_map>

namespace ineq {

namespace {

Real rational_value(const Rational& r) {
  return static_cast<Real>(r.get_num().get_d()) / static_cast<Real>(r.get_den().get_d());
}

Real exact_or_approx(const Rational& r) {
  // mpz -> double loses precision above 2^53; go through the string form for
  // large values so long double keeps its extra bits.
  if (mpz_sizeinbase(r.get_num_mpz_t(), 2) < 53 && mpz_sizeinbase(r.get_den_mpz_t(), 2) < 53) {
    return rational_value(r);
  }
  return std::strtold(r.get_num().get_str().c_str(), nullptr) / std::strtold(r.get_den().get_str().c_str(), nullptr);
}

Real real_pow(Real base, const Expr& exponent, Real exp_value) {
  if (exponent.is_const()) {
    const Rational& q = exponent.value();
    if (base == 0) {
      if (q < 0) throw DomainError("division by zero");
      return 0;
    }
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) {
      long n = q.get_num().get_si();
      return std::pow(base, static_cast<Real>(n));
    }
    if (base < 0) {
      if (mpz_even_p(q.get_den_mpz_t())) throw DomainError("even root of a negative number");
      Real mag = std::pow(-base, exp_value);
      return mpz_odd_p(q.get_num_mpz_t()) ? -mag : mag;
    }
    return std::pow(base, exp_value);
  }
  if (base < 0) throw DomainError("non-constant power of a negative number");
  if (base == 0) {
    if (exp_value <= 0) throw DomainError("zero to a non-positive power");
    return 0;
  }
  return std::pow(base, exp_value);
}

Real eval_rec(const Expr& e, const Assignment& at) {
  switch (e.kind()) {
    case Kind::Const:
      return exact_or_approx(e.value());
    case Kind::Symbol: {
      auto it = at.find(e.name());
      if (it == at.end()) throw MissingSymbol("no value for symbol '" + e.name() + "'");
      return it->second;
    }
    case Kind::Add: {
      Real s = 0;
      for (const auto& t : e.operands()) s += eval_rec(t, at);
      return s;
    }
    case Kind::Mul: {
      Real p = 1;
      for (const auto& f : e.operands()) p *= eval_rec(f, at);
      return p;
    }
    case Kind::Pow: {
      Real b = eval_rec(e.base(), at);
      Real x = eval_rec(e.exponent(), at);
      return real_pow(b, e.exponent(), x);
    }
  }
  return 0;
}

}  // namespace

Real evaluate(const Expr& e, const Assignment& at) {
  Real v = eval_rec(e, at);
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  return v;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& map) {
  if (map.empty()) return e;
  switch (e.kind()) {
    case Kind::Const:
      return e;
    case Kind::Symbol: {
      auto it = map.find(e.name());
      return it == map.end() ? e : it->second;
    }
    default: {
      ExprList ops;
      ops.reserve(e.operands().size());
      bool changed = false;
      for (const auto& op : e.operands()) {
        ops.push_back(substitute(op, map));
        changed = changed || ops.back() != op;
      }
      return changed ? rebuild(e, std::move(ops)) : e;
    }
  }
}

Expr differentiate(const Expr& e, const std::string& s) {
  switch (e.kind()) {
    case Kind::Const:
      return integer(0);
    case Kind::Symbol:
      return integer(e.name() == s ? 1 : 0);
    case Kind::Add: {
      ExprList terms;
      for (const auto& t : e.operands()) terms.push_back(differentiate(t, s));
      return add(std::move(terms));
    }
    case Kind::Mul: {
      const auto& ops = e.operands();
      ExprList terms;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expr d = differentiate(ops[i], s);
        if (d.is_zero()) continue;
        ExprList factors{d};
        for (std::size_t j = 0; j < ops.size(); ++j) {
          if (j != i) factors.push_back(ops[j]);
        }
        terms.push_back(mul(std::move(factors)));
      }
      return add(std::move(terms));
    }
    case Kind::Pow: {
      const Expr& b = e.base();
      const Expr& x = e.exponent();
      Expr db = differentiate(b, s);
      if (!contains_symbol(x, s)) {
        if (db.is_zero()) return integer(0);
        return mul({x, pow(b, add({x, integer(-1)})), db});
      }
      throw std::invalid_argument("differentiate: symbolic exponent depending on the variable");
    }
  }
  return integer(0);
}

Expr rotate(const Expr& e, const std::vector<std::string>& vars, std::size_t shift) {
  const std::size_t n = vars.size();
  if (n == 0 || shift % n == 0) return e;
  std::map<std::string, Expr> map;
  for (std::size_t i = 0; i < n; ++i) map[vars[i]] = symbol(vars[(i + shift) % n]);
  return substitute(e, map);
}

Expr cyclic_sum(const Expr& e, const std::vector<std::string>& vars) {
  ExprList terms;
  for (std::size_t k = 0; k < std::max<std::size_t>(vars.size(), 1); ++k) terms.push_back(rotate(e, vars, k));
  return add(std::move(terms));
}

bool is_cyclic_symmetric(const Expr& e, const std::vector<std::string>& vars) { return rotate(e, vars, 1) == e; }

std::optional<Rational> homogeneous_degree(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      return Rational(0);
    case Kind::Symbol:
      return Rational(1);
    case Kind::Add: {
      std::optional<Rational> deg;
      for (const auto& t : e.operands()) {
        auto d = homogeneous_degree(t);
        if (!d) return std::nullopt;
        if (deg && *deg != *d) return std::nullopt;
        deg = d;
      }
      return deg;
    }
    case Kind::Mul: {
      Rational total = 0;
      for (const auto& f : e.operands()) {
        auto d = homogeneous_degree(f);
        if (!d) return std::nullopt;
        total += *d;
      }
      return total;
    }
    case Kind::Pow: {
      if (!e.exponent().is_const()) {
        if (free_symbols(e).empty()) return Rational(0);
        return std::nullopt;
      }
      auto d = homogeneous_degree(e.base());
      if (!d) return std::nullopt;
      return *d * e.exponent().value();
    }
  }
  return std::nullopt;
}

Expr distribute(const Rational& c, const Expr& e) {
  if (!e.is_add()) return mul({constant(c), e});
  ExprList terms;
  for (const auto& t : e.operands()) terms.push_back(mul({constant(c), t}));
  return add(std::move(terms));
}

std::vector<std::string> symbol_list(const Expr& e) {
  auto s = free_symbols(e);
  return {s.begin(), s.end()};
}

}  // namespace ineq
