#include "ineq/inequality.hpp"

#include <algorithm>
#include <cmath>

namespace ineq {

Domain AssumptionSet::domain_of(const std::string& name) const {
  auto it = domains.find(name);
  return it == domains.end() ? Domain::Real : it->second;
}

std::vector<std::string> AssumptionSet::variables() const {
  std::vector<std::string> out;
  for (const auto& [name, d] : domains) out.push_back(name);
  return out;
}

AssumptionsPtr make_assumptions(const std::vector<std::string>& vars, Domain d, std::vector<Condition> conditions,
                                std::vector<Expr> facts) {
  auto a = std::make_shared<AssumptionSet>();
  for (const auto& v : vars) a->domains[v] = d;
  a->conditions = std::move(conditions);
  a->facts = std::move(facts);
  return a;
}

Inequality Inequality::oriented() const {
  Inequality out = *this;
  if (relation == Relation::Ge) {
    std::swap(out.lhs, out.rhs);
    out.relation = Relation::Le;
  } else if (relation == Relation::Gt) {
    std::swap(out.lhs, out.rhs);
    out.relation = Relation::Lt;
  }
  return out;
}

std::string Inequality::text(Style style) const {
  if (style == Style::Latex) {
    const char* op = "\\leq";
    switch (relation) {
      case Relation::Le:
        op = "\\leq";
        break;
      case Relation::Lt:
        op = "<";
        break;
      case Relation::Ge:
        op = "\\geq";
        break;
      case Relation::Gt:
        op = ">";
        break;
      case Relation::Eq:
        op = "=";
        break;
    }
    return render(lhs, style) + " " + op + " " + render(rhs, style);
  }
  return render(lhs) + " " + relation_text(relation) + " " + render(rhs);
}

std::uint64_t Inequality::hash() const {
  Inequality o = oriented();
  std::uint64_t h = o.lhs.hash() * 0x9e3779b97f4a7c15ULL;
  h ^= o.rhs.hash() + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(o.relation) * 0xbf58476d1ce4e5b9ULL;
  return h;
}

Inequality make_le(Expr lhs, Expr rhs, AssumptionsPtr asm_, bool strict) {
  Inequality g;
  g.relation = strict ? Relation::Lt : Relation::Le;
  g.lhs = std::move(lhs);
  g.rhs = std::move(rhs);
  g.assumptions = std::move(asm_);
  return g;
}

bool holds_at(const Inequality& g, const Assignment& at, Real slack) {
  Real l;
  Real r;
  try {
    l = evaluate(g.lhs, at);
    r = evaluate(g.rhs, at);
  } catch (const DomainError&) {
    return true;
  }
  // Relative slack, measured against the largest top-level term so that
  // cancellation inside an expanded side does not read as a violation.
  Real scale = std::max(std::fabs(l), std::fabs(r));
  try {
    for (const auto* side : {&g.lhs, &g.rhs}) {
      if (!side->is_add()) continue;
      for (const auto& t : side->operands()) scale = std::max(scale, std::fabs(evaluate(t, at)));
    }
  } catch (const DomainError&) {
  }
  Real tol = slack * scale;
  switch (g.relation) {
    case Relation::Le:
    case Relation::Lt:
      return l <= r + tol;
    case Relation::Ge:
    case Relation::Gt:
      return l + tol >= r;
    case Relation::Eq:
      return std::fabs(l - r) <= tol;
  }
  return true;
}

}  // namespace ineq
