#include "ineq/rewrite.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ineq/calculus.hpp"
#include "ineq/poly.hpp"
#include "ineq/sign.hpp"
#include "ineq/theorem.hpp"

namespace ineq {

const std::vector<RuleTag>& all_rules() {
  static const std::vector<RuleTag> rules = {
      {Rule::NodivExpr, "nodiv_expr", Soundness::Equivalence},
      {Rule::NomulExpr, "nomul_expr", Soundness::Equivalence},
      {Rule::NoSepDenom, "no_sep_denom", Soundness::Equivalence},
      {Rule::SepNeg, "sep_neg", Soundness::Equivalence},
      {Rule::ZeroSide, "zero_side", Soundness::Equivalence},
      {Rule::NoPow, "no_pow", Soundness::Equivalence},
      {Rule::TryTogetherL, "try_together_l", Soundness::Equivalence},
      {Rule::TryTogetherR, "try_together_r", Soundness::Equivalence},
      {Rule::TryExpandL, "try_expand_l", Soundness::Equivalence},
      {Rule::TryExpandR, "try_expand_r", Soundness::Equivalence},
      {Rule::AllCycMulExpr, "all_cyc_mul_expr", Soundness::ImpliesGoal},
      {Rule::TryFactorBoth, "try_factor_both", Soundness::Equivalence},
      {Rule::TryHomo, "try_homo", Soundness::Equivalence},
      {Rule::TrySimpR, "try_simp_r", Soundness::Equivalence},
  };
  return rules;
}

const RuleTag& rule_tag(Rule r) { return all_rules()[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_name(const std::string& name) {
  for (const auto& t : all_rules()) {
    if (name == t.name) return t.rule;
  }
  return std::nullopt;
}

RuleRegistry RuleRegistry::defaults() {
  RuleRegistry r;
  for (const auto& t : all_rules()) r.enable(t.rule);
  return r;
}

void RuleRegistry::enable(Rule r, std::size_t cap) {
  for (auto& [rule, c] : entries_) {
    if (rule == r) {
      c = cap;
      return;
    }
  }
  entries_.emplace_back(r, cap);
}

namespace {

ExprList factors_of(const Expr& e) { return e.is_mul() ? e.operands() : ExprList{e}; }
ExprList terms_of(const Expr& e) { return e.is_add() ? e.operands() : ExprList{e}; }

bool positive(const Expr& e, const AssumptionSet& asm_) {
  Sign s = syntactic_sign(e, asm_);
  if (s == Sign::Positive) return true;
  return infer_sign(e, asm_) == Sign::Positive;
}

bool has_denominator(const Expr& e) {
  for (const auto& t : terms_of(e)) {
    if (!split_fraction(t).second.is_one()) return true;
  }
  return false;
}

// c * (u + v) -> c*u + c*v for a rational c; anything else unchanged.
Expr tidy(const Expr& e) {
  if (!e.is_mul()) return e;
  auto [c, rest] = split_coefficient(e);
  if (c != 1 && rest.is_add()) return distribute(c, rest);
  return e;
}

// Multiplies a side by m, term by term when the side is a sum.
Expr scale_side(const Expr& side, const Expr& m) {
  if (!side.is_add()) return tidy(side * m);
  ExprList out;
  for (const auto& t : side.operands()) out.push_back(t * m);
  return add(out);
}

Expr expand_side(const Expr& e) {
  auto [num, den] = split_fraction(e);
  if (den.is_one() || e.is_add()) return expand(e);
  return expand(num) / expand(den);
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

struct Builder {
  const Inequality& g;
  std::size_t cap;
  std::vector<Inequality> out;
  std::set<std::uint64_t> seen;

  void add(const Expr& lhs, const Expr& rhs) {
    if (out.size() >= cap) return;
    if (lhs == g.lhs && rhs == g.rhs) return;
    Inequality s = make_le(lhs, rhs, g.assumptions, g.strict());
    s.equality_witness = g.equality_witness;
    if (seen.insert(s.hash()).second) out.push_back(std::move(s));
  }
};

void nodiv(Builder& b) {
  const auto& asm_ = *b.g.assumptions;
  // Sums of fractions are left to try_together first.
  for (const auto* side : {&b.g.lhs, &b.g.rhs})
    if (side->is_add() && has_denominator(*side)) return;
  auto [nl, dl] = split_fraction(b.g.lhs);
  auto [nr, dr] = split_fraction(b.g.rhs);
  if (dl.is_one() && dr.is_one()) return;
  if (!positive(dl, asm_) || !positive(dr, asm_)) return;
  b.add(tidy(nl * dr), tidy(nr * dl));
}

void nomul(Builder& b) {
  const auto& asm_ = *b.g.assumptions;
  const Expr& l = b.g.lhs;
  const Expr& r = b.g.rhs;
  // Cancel factors common to both sides.
  if (!l.is_add() && !r.is_add()) {
    ExprList cancel;
    auto rf = factors_of(r);
    for (const auto& f : factors_of(l)) {
      auto [base, x] = as_base_exp(f);
      if (base.is_const() || !x.is_const()) continue;
      for (const auto& h : rf) {
        auto [base2, x2] = as_base_exp(h);
        if (base2 != base || !x2.is_const()) continue;
        Rational p = x.value();
        Rational q = x2.value();
        if ((p > 0) != (q > 0)) continue;
        Rational m = p > 0 ? std::min(p, q) : std::max(p, q);
        if (positive(base, asm_)) cancel.push_back(pow(base, m));
      }
    }
    if (!cancel.empty()) {
      Expr c = mul(cancel);
      b.add(tidy(l / c), tidy(r / c));
    }
  }
  // Divide through by a whole side.
  if (!l.is_add() && !l.is_const() && positive(l, asm_)) b.add(integer(1), tidy(r / l));
  if (!r.is_add() && !r.is_const() && positive(r, asm_)) b.add(tidy(l / r), integer(1));
}

void sep_neg(Builder& b) {
  ExprList l;
  ExprList r;
  bool moved = false;
  for (const auto& t : terms_of(b.g.lhs)) {
    if (split_coefficient(t).first < 0) {
      r.push_back(neg(t));
      moved = true;
    } else if (!t.is_zero()) {
      l.push_back(t);
    }
  }
  for (const auto& t : terms_of(b.g.rhs)) {
    if (split_coefficient(t).first < 0) {
      l.push_back(neg(t));
      moved = true;
    } else if (!t.is_zero()) {
      r.push_back(t);
    }
  }
  if (moved) b.add(add(l), add(r));
}

void zero_side(Builder& b) {
  if (b.g.lhs.is_zero()) return;
  ExprList terms = terms_of(b.g.rhs);
  for (const auto& t : terms_of(b.g.lhs)) terms.push_back(neg(t));
  b.add(integer(0), add(terms));
}

void no_pow(Builder& b) {
  const auto& asm_ = *b.g.assumptions;
  const Expr& l = b.g.lhs;
  const Expr& r = b.g.rhs;
  if (l.is_add() || r.is_add()) return;
  if (!is_nonneg(infer_sign(l, asm_)) || !is_nonneg(infer_sign(r, asm_))) return;
  std::vector<Rational> exps;
  for (const auto& side : {l, r}) {
    for (const auto& f : factors_of(side)) {
      auto [base, x] = as_base_exp(f);
      if (base.is_const()) continue;
      if (!x.is_const()) return;
      exps.push_back(x.value());
    }
  }
  if (exps.empty()) return;
  long den = 1;
  for (const auto& x : exps) den = lcm_long(den, x.get_den().get_si());
  if (den > 1) {
    b.add(pow(l, den), pow(r, den));
    return;
  }
  // Equal integer powers on both sides: take the common root.
  Integer g = 0;
  for (const auto& x : exps) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  if (g > 1) {
    Rational root(1, g.get_si());
    Expr nl = pow(l, root);
    Expr nr = pow(r, root);
    b.add(nl, nr);
  }
}

void cyc_mul(Builder& b) {
  for (const auto& m : cyclic_multiplier_candidates(b.g)) b.add(scale_side(b.g.lhs, m), scale_side(b.g.rhs, m));
}

Expr factor_side(const Expr& side) {
  if (!side.is_add()) return side;
  Poly p;
  try {
    p = to_poly(side, 2000);
  } catch (const std::exception&) {
    return side;
  }
  if (!is_plain_polynomial(p) || p.size() < 2) return side;
  Rational c = poly_content(p);
  Monomial m = poly_monomial_gcd(p);
  Poly rest = poly_mul_monomial(poly_scale(p, Rational(1) / c), monomial_pow(m, Rational(-1)));
  Expr core = from_poly(rest);
  for (unsigned long k : {2ul, 3ul}) {
    auto root = poly_root(rest, k);
    if (root) {
      core = pow(from_poly(*root), static_cast<long>(k));
      break;
    }
  }
  return constant(c) * monomial_expr(m) * core;
}

void factor_both(Builder& b) {
  Expr l = factor_side(b.g.lhs);
  Expr r = factor_side(b.g.rhs);
  if (l != b.g.lhs || r != b.g.rhs) b.add(l, r);
}

void simp_r(Builder& b) {
  const Expr& r = b.g.rhs;
  if (r.is_const()) return;
  try {
    auto [num, den] = split_fraction(together(r));
    if (den.is_one()) return;
    auto q = poly_divide_exact(to_poly(num, 2000), to_poly(den, 2000));
    if (!q) return;
    b.add(b.g.lhs, from_poly(*q));
  } catch (const std::exception&) {
  }
}

}  // namespace

std::pair<Expr, Expr> split_fraction(const Expr& e) {
  ExprList num;
  ExprList den;
  for (const auto& f : factors_of(e)) {
    if (f.is_const()) {
      const Rational& v = f.value();
      num.push_back(constant(Rational(v.get_num())));
      den.push_back(constant(Rational(v.get_den())));
      continue;
    }
    auto [base, x] = as_base_exp(f);
    if (x.is_const() && x.value() < 0) {
      den.push_back(pow(base, Rational(-x.value())));
    } else {
      num.push_back(f);
    }
  }
  return {mul(num), mul(den)};
}

std::vector<Expr> cyclic_multiplier_candidates(const Inequality& g) {
  const auto& asm_ = *g.assumptions;
  auto vars = asm_.variables();
  std::vector<Expr> out;
  std::set<std::uint64_t> seen;
  auto push = [&](const Expr& m) {
    if (m.is_const() || !is_cyclic_symmetric(m, vars)) return;
    if (!positive(m, asm_)) return;
    if (seen.insert(m.hash()).second) out.push_back(m);
  };
  // Whole factors of a product side, divided out.
  for (const auto& side : {g.lhs, g.rhs}) {
    if (side.is_add()) continue;
    for (const auto& f : factors_of(side)) {
      auto [base, x] = as_base_exp(f);
      if (base.is_const() || !x.is_const()) continue;
      push(pow(base, Rational(-x.value())));
    }
  }
  // Denominators of summands, closed under rotation.
  for (const auto& side : {g.lhs, g.rhs}) {
    for (const auto& t : terms_of(side)) {
      Expr den = split_fraction(t).second;
      if (den.is_const()) continue;
      if (is_cyclic_symmetric(den, vars)) {
        push(den);
        continue;
      }
      ExprList prod;
      std::set<std::uint64_t> images;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        Expr img = rotate(den, vars, k);
        if (images.insert(img.hash()).second) prod.push_back(img);
      }
      push(mul(prod));
    }
  }
  return out;
}

namespace {

struct HomoCondition {
  Expr c;
  Rational k;
  Rational d;
};

std::optional<HomoCondition> homo_condition(const AssumptionSet& asm_) {
  std::optional<HomoCondition> found;
  for (const auto& cond : asm_.conditions) {
    Expr c = cond.lhs;
    Expr k = cond.rhs;
    if (c.is_const()) std::swap(c, k);
    if (!k.is_const() || k.value() <= 0) continue;
    auto d = homogeneous_degree(c);
    if (!d || *d <= 0) continue;
    if (found) return std::nullopt;
    found = HomoCondition{c, k.value(), *d};
  }
  return found;
}

Expr scaled_condition(const HomoCondition& h, const Rational& q) {
  if (q == 0) return integer(1);
  return pow(h.k == 1 ? h.c : constant(Rational(1) / h.k) * h.c, q);
}

// Balances every inner sum to its largest degree, bottom-up.
Expr homogenize_inner(const Expr& e, const HomoCondition& h, bool top) {
  if (e.operands().empty()) return e;
  ExprList ops;
  for (const auto& o : e.operands()) ops.push_back(homogenize_inner(o, h, false));
  Expr r = rebuild(e, std::move(ops));
  if (top || !r.is_add() || homogeneous_degree(r)) return r;
  std::vector<Rational> degs;
  for (const auto& t : r.operands()) {
    auto d = homogeneous_degree(t);
    if (!d) return r;
    degs.push_back(*d);
  }
  Rational target = *std::max_element(degs.begin(), degs.end());
  ExprList terms;
  for (std::size_t i = 0; i < degs.size(); ++i) {
    terms.push_back(r.operands()[i] * scaled_condition(h, (target - degs[i]) / h.d));
  }
  return add(terms);
}

}  // namespace

std::vector<Inequality> homogenize(const Inequality& g) {
  auto h = homo_condition(*g.assumptions);
  if (!h) return {};
  Expr l = homogenize_inner(g.lhs, *h, true);
  Expr r = homogenize_inner(g.rhs, *h, true);
  std::vector<std::pair<Expr, Rational>> terms;
  for (const auto& side : {l, r}) {
    for (const auto& t : terms_of(side)) {
      auto d = homogeneous_degree(t);
      if (!d) return {};
      terms.emplace_back(t, *d);
    }
  }
  Rational lo = terms[0].second;
  Rational hi = terms[0].second;
  for (const auto& [t, d] : terms) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (lo == hi && l == g.lhs && r == g.rhs) return {};
  // Candidate common degrees: the smallest nonnegative degree reachable from
  // the lowest term by whole powers of the condition, then the largest one.
  std::vector<Rational> targets;
  if (lo < 0) {
    Rational q = -lo / h->d;
    Integer steps = q.get_num() / q.get_den();
    if (Rational(steps) < q) steps += 1;
    targets.push_back(lo + Rational(steps) * h->d);
  }
  if (std::find(targets.begin(), targets.end(), hi) == targets.end()) targets.push_back(hi);
  std::vector<Inequality> out;
  std::set<std::uint64_t> seen;
  for (const auto& target : targets) {
    auto balance = [&](const Expr& side) {
      ExprList ts;
      for (const auto& t : terms_of(side)) {
        Rational d = *homogeneous_degree(t);
        ts.push_back(t * scaled_condition(*h, (target - d) / h->d));
      }
      return add(ts);
    };
    Inequality s = make_le(balance(l), balance(r), g.assumptions, g.strict());
    s.equality_witness = g.equality_witness;
    if (s.lhs == g.lhs && s.rhs == g.rhs) continue;
    if (seen.insert(s.hash()).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<Inequality> apply_rule(Rule r, const Inequality& g, std::size_t cap) {
  Builder b{g, cap, {}, {}};
  try {
    switch (r) {
      case Rule::NodivExpr:
        nodiv(b);
        break;
      case Rule::NomulExpr:
        nomul(b);
        break;
      case Rule::NoSepDenom: {
        Expr l = together(g.lhs);
        Expr rr = together(g.rhs);
        if (l != g.lhs && rr != g.rhs) b.add(l, rr);
        break;
      }
      case Rule::SepNeg:
        sep_neg(b);
        break;
      case Rule::ZeroSide:
        zero_side(b);
        break;
      case Rule::NoPow:
        no_pow(b);
        break;
      case Rule::TryTogetherL:
        b.add(together(g.lhs), g.rhs);
        break;
      case Rule::TryTogetherR:
        b.add(g.lhs, together(g.rhs));
        break;
      case Rule::TryExpandL:
        b.add(expand_side(g.lhs), g.rhs);
        break;
      case Rule::TryExpandR:
        b.add(g.lhs, expand_side(g.rhs));
        break;
      case Rule::AllCycMulExpr:
        cyc_mul(b);
        break;
      case Rule::TryFactorBoth:
        factor_both(b);
        break;
      case Rule::TryHomo:
        for (auto& s : homogenize(g)) {
          if (b.out.size() < cap) b.out.push_back(std::move(s));
        }
        break;
      case Rule::TrySimpR:
        simp_r(b);
        break;
    }
  } catch (const std::exception&) {
    // Size caps and domain errors just mean no successor.
  }
  return std::move(b.out);
}

}  // namespace ineq
