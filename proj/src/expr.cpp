#include "ineq/expr.hpp"

#include <algorithm>
#include <map>

namespace ineq {
namespace {

constexpr std::uint64_t kHashSeed = 0x6a09e667f3bcc909ULL;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t seed, std::uint64_t v) { return mix(seed ^ (v + 0x632be59bd9b4e019ULL + (seed << 6))); }

std::uint64_t hash_mpz(const mpz_t z) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(mpz_sgn(z)) + 7);
  const std::size_t n = mpz_size(z);
  for (std::size_t i = 0; i < n; ++i) h = combine(h, static_cast<std::uint64_t>(mpz_getlimbn(z, i)));
  return h;
}

using NodePtr = std::shared_ptr<const detail::Node>;

Expr make_node(Kind kind, ExprList ops) {
  auto n = std::make_shared<detail::Node>();
  n->kind = kind;
  std::uint64_t h = combine(kHashSeed, static_cast<std::uint64_t>(kind) + 101);
  int depth = 0;
  std::size_t size = 1;
  for (const auto& op : ops) {
    h = combine(h, op.hash());
    depth = std::max(depth, op.depth());
    size += op.size();
  }
  n->hash = combine(h, ops.size());
  n->depth = depth + 1;
  n->size = size;
  n->ops = std::move(ops);
  return Expr::from_node(std::move(n));
}

Expr make_const(const Rational& v) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Const;
  n->value = v;
  n->value.canonicalize();
  n->hash = combine(kHashSeed, hash_rational(n->value));
  return Expr::from_node(std::move(n));
}

const Expr& zero_expr() {
  static const Expr z = make_const(Rational(0));
  return z;
}

// Integer k-th root if exact.
bool exact_root(const Integer& v, unsigned long k, Integer& out) {
  if (v < 0) return false;
  return mpz_root(out.get_mpz_t(), v.get_mpz_t(), k) != 0;
}

constexpr unsigned long kMaxConstPower = 256;

Expr pow_const(const Rational& r, const Rational& q);

Expr mul_raw_sorted(Rational coeff, ExprList factors) {
  std::sort(factors.begin(), factors.end(), ExprLess{});
  if (coeff == 0) return zero_expr();
  if (factors.empty()) return make_const(coeff);
  if (coeff == 1 && factors.size() == 1) return factors.front();
  ExprList ops;
  ops.reserve(factors.size() + 1);
  if (coeff != 1) ops.push_back(make_const(coeff));
  for (auto& f : factors) ops.push_back(std::move(f));
  return make_node(Kind::Mul, std::move(ops));
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (c == 0) return zero_expr();
  if (rest.is_const()) return make_const(c * rest.value());
  if (c == 1) return rest;
  ExprList ops;
  ops.push_back(make_const(c));
  if (rest.is_mul()) {
    for (const auto& f : rest.operands()) ops.push_back(f);
  } else {
    ops.push_back(rest);
  }
  return make_node(Kind::Mul, std::move(ops));
}

Expr pow_node(const Expr& base, const Expr& exponent) { return make_node(Kind::Pow, {base, exponent}); }

Expr pow_const(const Rational& r, const Rational& q) {
  if (q == 0) return make_const(1);
  if (r == 0) {
    if (q > 0) return make_const(0);
    throw DomainError("division by zero");
  }
  if (r == 1) return make_const(1);
  const Integer& p = q.get_num();
  const Integer& d = q.get_den();
  if (!p.fits_slong_p() || std::abs(p.get_si()) > static_cast<long>(kMaxConstPower)) {
    return pow_node(make_const(r), make_const(q));
  }
  const long pe = p.get_si();
  auto raise = [](const Rational& x, long e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(std::abs(e)));
    mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(std::abs(e)));
    out.canonicalize();
    if (e < 0) out = 1 / out;
    return out;
  };
  if (d == 1) return make_const(raise(r, pe));
  if (!d.fits_ulong_p()) return pow_node(make_const(r), make_const(q));
  const unsigned long k = d.get_ui();
  // Real roots only: even roots of negatives stay unevaluated.
  const bool negative = r < 0;
  if (negative && k % 2 == 0) return pow_node(make_const(r), make_const(q));
  Rational mag = negative ? Rational(-r) : r;
  Integer rn, rd;
  if (exact_root(mag.get_num(), k, rn) && exact_root(mag.get_den(), k, rd)) {
    Rational root(rn, rd);
    root.canonicalize();
    if (negative) root = -root;
    return make_const(raise(root, pe));
  }
  // r^(p/d) = r^floor(p/d) * r^(frac) with frac in (0, 1).
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), p.get_mpz_t(), d.get_mpz_t());
  Rational frac = q - Rational(fl);
  Rational lead = raise(r, fl.get_si());
  Expr radical = pow_node(make_const(r), make_const(frac));
  if (lead == 1) return radical;
  return make_node(Kind::Mul, {make_const(lead), radical});
}

}  // namespace

std::uint64_t hash_seed() { return kHashSeed; }

std::uint64_t hash_rational(const Rational& r) {
  return combine(hash_mpz(r.get_num_mpz_t()), hash_mpz(r.get_den_mpz_t()));
}

Expr::Expr() : node_(zero_expr().node_) {}

bool Expr::is_integer() const { return is_const() && value().get_den() == 1; }
bool Expr::is_zero() const { return is_const() && value() == 0; }
bool Expr::is_one() const { return is_const() && value() == 1; }

const Rational& Expr::value() const {
  if (!is_const()) throw std::logic_error("value() on non-constant");
  return node_->value;
}

const std::string& Expr::name() const {
  if (!is_symbol()) throw std::logic_error("name() on non-symbol");
  return node_->name;
}

const Expr& Expr::base() const {
  if (!is_pow()) throw std::logic_error("base() on non-power");
  return node_->ops[0];
}

const Expr& Expr::exponent() const {
  if (!is_pow()) throw std::logic_error("exponent() on non-power");
  return node_->ops[1];
}

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Const: {
      int c = cmp(a.value(), b.value());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Symbol: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default: {
      if (a.hash() == b.hash() && a.size() == b.size()) {
        // Likely equal; fall through to the structural walk.
      }
      const auto& x = a.operands();
      const auto& y = b.operands();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(x[i], y[i]);
        if (c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  return compare(a, b) == 0;
}

Expr integer(long v) { return make_const(Rational(v)); }

Expr rational(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return make_const(r);
}

Expr constant(const Rational& v) { return make_const(v); }

Expr symbol(const std::string& name) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Symbol;
  n->name = name;
  n->hash = combine(kHashSeed ^ 0x5bd1e995ULL, std::hash<std::string>{}(name));
  return Expr::from_node(std::move(n));
}

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_const()) return {term.value(), integer(1)};
  if (term.is_mul() && term.operands().front().is_const()) {
    const auto& ops = term.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    ExprList rest(ops.begin() + 1, ops.end());
    return {ops[0].value(), make_node(Kind::Mul, std::move(rest))};
  }
  return {Rational(1), term};
}

std::pair<Expr, Expr> as_base_exp(const Expr& factor) {
  if (factor.is_pow()) return {factor.base(), factor.exponent()};
  return {factor, integer(1)};
}

Expr add(ExprList terms) {
  Rational constant_part = 0;
  std::map<Expr, Rational, ExprLess> coeffs;
  std::vector<Expr> stack(terms.rbegin(), terms.rend());
  while (!stack.empty()) {
    Expr t = std::move(stack.back());
    stack.pop_back();
    if (t.is_add()) {
      for (auto it = t.operands().rbegin(); it != t.operands().rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (t.is_const()) {
      constant_part += t.value();
      continue;
    }
    auto [c, rest] = split_coefficient(t);
    auto [it, inserted] = coeffs.try_emplace(rest, c);
    if (!inserted) it->second += c;
  }
  ExprList out;
  out.reserve(coeffs.size() + 1);
  if (constant_part != 0) out.push_back(make_const(constant_part));
  for (const auto& [rest, c] : coeffs) {
    if (c == 0) continue;
    out.push_back(with_coefficient(c, rest));
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), ExprLess{});
  return make_node(Kind::Add, std::move(out));
}

Expr mul(ExprList factors) {
  Rational coeff = 1;
  // base -> accumulated exponent (constant part and symbolic parts)
  struct Acc {
    Rational constant = 0;
    ExprList symbolic;
  };
  std::map<Expr, Acc, ExprLess> powers;
  std::vector<Expr> work(factors.rbegin(), factors.rend());
  int guard = 0;
  for (;;) {
    while (!work.empty()) {
      Expr f = std::move(work.back());
      work.pop_back();
      if (f.is_mul()) {
        for (auto it = f.operands().rbegin(); it != f.operands().rend(); ++it) work.push_back(*it);
        continue;
      }
      if (f.is_const()) {
        coeff *= f.value();
        continue;
      }
      auto [b, e] = as_base_exp(f);
      auto& acc = powers[b];
      if (e.is_const()) {
        acc.constant += e.value();
      } else {
        acc.symbolic.push_back(e);
      }
    }
    if (coeff == 0) return zero_expr();
    // Materialize grouped powers; results that are constants or products
    // are fed back through the loop.
    ExprList done;
    bool requeue = false;
    std::map<Expr, Acc, ExprLess> next;
    for (auto& [b, acc] : powers) {
      Expr e;
      if (acc.symbolic.empty()) {
        e = make_const(acc.constant);
      } else {
        ExprList parts = acc.symbolic;
        if (acc.constant != 0) parts.push_back(make_const(acc.constant));
        e = add(std::move(parts));
      }
      if (e.is_zero()) continue;
      Expr p = pow(b, e);
      if (p.is_const() || p.is_mul()) {
        work.push_back(p);
        requeue = true;
      } else {
        done.push_back(p);
      }
    }
    if (!requeue || ++guard > 8) {
      for (auto& w : work) done.push_back(w);
      if (guard > 8) {
        // Pathological cycles; accept current factors as they are.
      }
      return mul_raw_sorted(coeff, std::move(done));
    }
    // Re-seed accumulation with the finished factors plus requeued ones.
    powers.clear();
    for (auto& d : done) work.push_back(d);
  }
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_const()) {
    const Rational& q = exponent.value();
    if (q == 0) return integer(1);
    if (q == 1) return base;
    if (base.is_const()) return pow_const(base.value(), q);
    if (base.is_pow() && base.exponent().is_const()) {
      const Expr& inner = base.base();
      Rational pq = base.exponent().value() * q;
      if (q.get_den() == 1 || syntactically_nonneg(inner)) return pow(inner, make_const(pq));
      return pow_node(base, exponent);
    }
    if (base.is_mul()) {
      auto [c, rest] = split_coefficient(base);
      const bool integral = q.get_den() == 1;
      bool distributable = integral;
      if (!distributable && c > 0) {
        distributable = true;
        for (const auto& f : base.operands()) {
          if (f.is_const()) continue;
          if (!syntactically_nonneg(f)) {
            distributable = false;
            break;
          }
        }
      }
      if (distributable) {
        ExprList parts;
        for (const auto& f : base.operands()) parts.push_back(pow(f, exponent));
        return mul(std::move(parts));
      }
    }
    return pow_node(base, exponent);
  }
  if (base.is_one()) return integer(1);
  return pow_node(base, exponent);
}

Expr pow(const Expr& base, const Rational& exponent) { return pow(base, make_const(exponent)); }
Expr pow(const Expr& base, long exponent) { return pow(base, make_const(Rational(exponent))); }
Expr sqrt(const Expr& e) { return pow(e, rational(1, 2)); }
Expr neg(const Expr& e) { return mul({integer(-1), e}); }

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, neg(b)}); }
Expr operator-(const Expr& a) { return neg(a); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, integer(-1))}); }

Expr rebuild(const Expr& e, ExprList ops) {
  switch (e.kind()) {
    case Kind::Add:
      return add(std::move(ops));
    case Kind::Mul:
      return mul(std::move(ops));
    case Kind::Pow:
      return pow(ops.at(0), ops.at(1));
    default:
      return e;
  }
}

Expr canonicalize(const Expr& e) {
  if (e.is_const() || e.is_symbol()) return e;
  ExprList ops;
  ops.reserve(e.operands().size());
  for (const auto& op : e.operands()) ops.push_back(canonicalize(op));
  return rebuild(e, std::move(ops));
}

bool syntactically_nonneg(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
      return e.value() >= 0;
    case Kind::Symbol:
      return true;
    case Kind::Pow: {
      const Expr& x = e.exponent();
      if (x.is_integer() && mpz_even_p(x.value().get_num_mpz_t())) return true;
      return syntactically_nonneg(e.base());
    }
    case Kind::Mul:
    case Kind::Add:
      return std::all_of(e.operands().begin(), e.operands().end(), syntactically_nonneg);
  }
  return false;
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& op : e.operands()) collect_symbols(op, out);
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool contains_symbol(const Expr& e, const std::string& name) {
  if (e.is_symbol()) return e.name() == name;
  for (const auto& op : e.operands()) {
    if (contains_symbol(op, name)) return true;
  }
  return false;
}

const Expr& subexpr_at(const Expr& root, const std::vector<std::size_t>& path) {
  const Expr* cur = &root;
  for (std::size_t idx : path) cur = &cur->operands().at(idx);
  return *cur;
}

namespace {
Expr replace_rec(const Expr& node, const std::vector<std::size_t>& path, std::size_t pos, const Expr& repl) {
  if (pos == path.size()) return repl;
  ExprList ops = node.operands();
  ops.at(path[pos]) = replace_rec(ops[path[pos]], path, pos + 1, repl);
  return rebuild(node, std::move(ops));
}
}  // namespace

Expr replace_at(const Expr& root, const std::vector<std::size_t>& path, const Expr& replacement) {
  return replace_rec(root, path, 0, replacement);
}

}  // namespace ineq
