#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ineq/expr.hpp"
#include "ineq/inequality.hpp"

namespace ineq {

enum class Rule {
  NodivExpr,
  NomulExpr,
  NoSepDenom,
  SepNeg,
  ZeroSide,
  NoPow,
  TryTogetherL,
  TryTogetherR,
  TryExpandL,
  TryExpandR,
  AllCycMulExpr,
  TryFactorBoth,
  TryHomo,
  TrySimpR,
};

enum class Soundness { Equivalence, ImpliesGoal };

struct RuleTag {
  Rule rule;
  const char* name;
  Soundness soundness;
};

/// Fixed metadata for every rule, in declaration order.
const std::vector<RuleTag>& all_rules();
const RuleTag& rule_tag(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

/// Ordered set of enabled rules with a per-rule cap on successors.
class RuleRegistry {
 public:
  /// Every rule enabled, cap 8 each.
  static RuleRegistry defaults();

  void enable(Rule r, std::size_t cap = 8);
  const std::vector<std::pair<Rule, std::size_t>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<Rule, std::size_t>> entries_;
};

/// One application of a rule to g (oriented lhs <= rhs). Empty when the
/// rule's precondition fails or nothing would change.
std::vector<Inequality> apply_rule(Rule r, const Inequality& g, std::size_t cap = 8);

/// Degree-balancing rewrite from a single homogeneous equational condition.
std::vector<Inequality> homogenize(const Inequality& g);

/// Positive cyclically symmetric multipliers built from factors and
/// denominators that occur in g.
std::vector<Expr> cyclic_multiplier_candidates(const Inequality& g);

/// Numerator and denominator read off the factor structure of e (no
/// combining of sums).
std::pair<Expr, Expr> split_fraction(const Expr& e);

}  // namespace ineq
