#include "ineq/sign.hpp"

#include "ineq/poly.hpp"

namespace ineq {

namespace {

// Sign as a set of possible outcomes.
constexpr unsigned kPos = 1;
constexpr unsigned kZero = 2;
constexpr unsigned kNeg = 4;
constexpr unsigned kAny = kPos | kZero | kNeg;

Sign from_set(unsigned s) {
  switch (s) {
    case kPos:
      return Sign::Positive;
    case kPos | kZero:
      return Sign::NonNegative;
    case kZero:
      return Sign::Zero;
    case kNeg | kZero:
      return Sign::NonPositive;
    case kNeg:
      return Sign::Negative;
    default:
      return Sign::Unknown;
  }
}

unsigned mul_sets(unsigned a, unsigned b) {
  unsigned out = 0;
  if ((a & kZero) || (b & kZero)) out |= kZero;
  if (((a & kPos) && (b & kPos)) || ((a & kNeg) && (b & kNeg))) out |= kPos;
  if (((a & kPos) && (b & kNeg)) || ((a & kNeg) && (b & kPos))) out |= kNeg;
  return out;
}

unsigned add_sets(unsigned a, unsigned b) {
  unsigned out = 0;
  for (unsigned x : {kPos, kZero, kNeg}) {
    if (!(a & x)) continue;
    for (unsigned y : {kPos, kZero, kNeg}) {
      if (!(b & y)) continue;
      if (x == kZero) {
        out |= y;
      } else if (y == kZero || x == y) {
        out |= x;
      } else {
        out |= kAny;
      }
    }
  }
  return out;
}

unsigned symbol_set(const Expr& e, const AssumptionSet& asm_) {
  switch (asm_.domain_of(e.name())) {
    case Domain::Positive:
      return kPos;
    case Domain::NonNegative:
      return kPos | kZero;
    case Domain::Real:
      return kAny;
  }
  return kAny;
}

unsigned syntactic_set(const Expr& e, const AssumptionSet& asm_) {
  switch (e.kind()) {
    case Kind::Const:
      return e.value() > 0 ? kPos : (e.value() < 0 ? kNeg : kZero);
    case Kind::Symbol:
      return symbol_set(e, asm_);
    case Kind::Add: {
      unsigned s = kZero;
      for (const auto& t : e.operands()) {
        s = add_sets(s, syntactic_set(t, asm_));
        if (s == kAny) return s;
      }
      return s;
    }
    case Kind::Mul: {
      unsigned s = kPos;
      for (const auto& f : e.operands()) s = mul_sets(s, syntactic_set(f, asm_));
      return s;
    }
    case Kind::Pow: {
      unsigned b = syntactic_set(e.base(), asm_);
      const Expr& x = e.exponent();
      if (!x.is_const()) return b == kPos ? kPos : kAny;
      const Rational& q = x.value();
      unsigned out;
      if (q.get_den() == 1) {
        if (mpz_even_p(q.get_num_mpz_t())) {
          out = ((b & (kPos | kNeg)) ? kPos : 0u) | (b & kZero);
        } else {
          out = b;
        }
      } else if (mpz_even_p(q.get_den_mpz_t())) {
        // Defined only where the base is nonnegative.
        out = (b & kPos) | (b & kZero);
        if (b & kNeg) out |= kPos | kZero;
        if (out == 0) out = kZero;
      } else if (mpz_even_p(q.get_num_mpz_t())) {
        out = ((b & (kPos | kNeg)) ? kPos : 0u) | (b & kZero);
      } else {
        out = b;
      }
      if (q < 0) {
        out &= ~kZero;
        if (out == 0) out = kPos;  // only reachable at a pole
      }
      return out;
    }
  }
  return kAny;
}

bool all_terms_nonneg(const Poly& p, const AssumptionSet& asm_, unsigned& combined) {
  combined = kZero;
  for (const auto& [m, c] : p) {
    Expr term = mul({constant(c), monomial_expr(m)});
    unsigned s = syntactic_set(term, asm_);
    combined = add_sets(combined, s);
    if (s & kNeg) return false;
  }
  return true;
}

// Coefficient-wise check of p - l1*f1 - l2*f2 with nonnegative residual.
bool residual_nonneg(const Poly& p, const AssumptionSet& asm_) {
  unsigned combined;
  return all_terms_nonneg(p, asm_, combined);
}

bool nonneg_by_facts(const Poly& p, const AssumptionSet& asm_) {
  if (asm_.facts.empty()) return false;
  std::vector<Poly> facts;
  for (const auto& f : asm_.facts) {
    try {
      facts.push_back(to_poly(f, 500));
    } catch (const std::exception&) {
    }
  }
  auto candidates = [&](const Poly& target, const Poly& f) {
    std::vector<Rational> out;
    for (const auto& [m, c] : f) {
      auto it = target.find(m);
      if (it != target.end() && (it->second / c) > 0) out.push_back(it->second / c);
    }
    return out;
  };
  for (const auto& f1 : facts) {
    for (const Rational& l1 : candidates(p, f1)) {
      Poly r1 = poly_add(p, f1, -l1);
      if (residual_nonneg(r1, asm_)) return true;
      for (const auto& f2 : facts) {
        if (&f2 == &f1) continue;
        for (const Rational& l2 : candidates(r1, f2)) {
          if (residual_nonneg(poly_add(r1, f2, -l2), asm_)) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

const char* sign_name(Sign s) {
  switch (s) {
    case Sign::Positive:
      return "Positive";
    case Sign::NonNegative:
      return "NonNegative";
    case Sign::Zero:
      return "Zero";
    case Sign::NonPositive:
      return "NonPositive";
    case Sign::Negative:
      return "Negative";
    case Sign::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

bool is_nonneg(Sign s) { return s == Sign::Positive || s == Sign::NonNegative || s == Sign::Zero; }
bool is_nonpos(Sign s) { return s == Sign::Negative || s == Sign::NonPositive || s == Sign::Zero; }

Sign negate(Sign s) {
  switch (s) {
    case Sign::Positive:
      return Sign::Negative;
    case Sign::NonNegative:
      return Sign::NonPositive;
    case Sign::NonPositive:
      return Sign::NonNegative;
    case Sign::Negative:
      return Sign::Positive;
    default:
      return s;
  }
}

Sign syntactic_sign(const Expr& e, const AssumptionSet& asm_) { return from_set(syntactic_set(e, asm_)); }

Sign infer_sign(const Expr& e, const AssumptionSet& asm_) {
  unsigned s = syntactic_set(e, asm_);
  if (s != kAny && s != (kPos | kNeg)) return from_set(s);
  Poly p;
  try {
    p = to_poly(e, 2000);
  } catch (const std::exception&) {
    return from_set(s);
  }
  if (p.empty()) return Sign::Zero;
  unsigned combined;
  if (all_terms_nonneg(p, asm_, combined)) return from_set(combined);
  Poly neg = poly_scale(p, Rational(-1));
  if (all_terms_nonneg(neg, asm_, combined)) return negate(from_set(combined));
  if (nonneg_by_facts(p, asm_)) return Sign::NonNegative;
  if (nonneg_by_facts(neg, asm_)) return Sign::NonPositive;
  return Sign::Unknown;
}

namespace {

Mono direction_of(Sign s) {
  if (s == Sign::Positive || s == Sign::NonNegative) return Mono::Inc;
  if (s == Sign::Negative || s == Sign::NonPositive) return Mono::Dec;
  return Mono::None;
}

void label_rec(const Expr& e, const AssumptionSet& asm_, Mono label, Path& path, MonotoneLabeling& out) {
  out.labels[path] = label;
  const auto& ops = e.operands();
  if (ops.empty()) return;
  std::vector<Mono> child(ops.size(), Mono::None);
  if (label != Mono::None) {
    switch (e.kind()) {
      case Kind::Add:
        std::fill(child.begin(), child.end(), label);
        break;
      case Kind::Mul: {
        std::vector<unsigned> sets;
        sets.reserve(ops.size());
        for (const auto& f : ops) sets.push_back(syntactic_set(f, asm_));
        for (std::size_t i = 0; i < ops.size(); ++i) {
          unsigned cof = kPos;
          for (std::size_t j = 0; j < ops.size(); ++j) {
            if (j != i) cof = mul_sets(cof, sets[j]);
          }
          child[i] = label * direction_of(from_set(cof));
        }
        break;
      }
      case Kind::Pow: {
        const Expr& x = e.exponent();
        if (x.is_const()) {
          unsigned b = syntactic_set(e.base(), asm_);
          const Rational& q = x.value();
          Mono local = Mono::None;
          if (q > 0 && (b == kPos || b == (kPos | kZero))) local = Mono::Inc;
          if (q < 0 && (b == kPos || b == (kPos | kZero))) local = Mono::Dec;
          child[0] = label * local;
        }
        break;
      }
      default:
        break;
    }
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    path.push_back(i);
    label_rec(ops[i], asm_, child[i], path, out);
    path.pop_back();
  }
}

}  // namespace

MonotoneLabeling label_monotonicity(const Expr& root, const AssumptionSet& asm_) {
  MonotoneLabeling out;
  Path path;
  label_rec(root, asm_, Mono::Inc, path, out);
  return out;
}

}  // namespace ineq
