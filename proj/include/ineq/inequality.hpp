#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ineq/calculus.hpp"
#include "ineq/expr.hpp"
#include "ineq/io.hpp"

namespace ineq {

enum class Domain { Positive, NonNegative, Real };

/// Equational side condition lhs = rhs (e.g. a*b*c = 1).
struct Condition {
  Expr lhs;
  Expr rhs;
};

struct AssumptionSet {
  std::map<std::string, Domain> domains;
  std::vector<Condition> conditions;
  /// Expressions asserted to be >= 0: ordering facts such as a - b for
  /// a >= b, and inequality side conditions moved to one side.
  std::vector<Expr> facts;

  Domain domain_of(const std::string& name) const;
  std::vector<std::string> variables() const;
};

using AssumptionsPtr = std::shared_ptr<const AssumptionSet>;

/// Assumptions with every listed variable in the given domain.
AssumptionsPtr make_assumptions(const std::vector<std::string>& vars, Domain d = Domain::Positive,
                                std::vector<Condition> conditions = {}, std::vector<Expr> facts = {});

struct Inequality {
  Relation relation = Relation::Le;
  Expr lhs;
  Expr rhs;
  AssumptionsPtr assumptions;
  std::optional<Assignment> equality_witness;

  /// Same statement with relation <= or < (sides swapped for >= and >).
  Inequality oriented() const;
  bool strict() const { return relation == Relation::Lt || relation == Relation::Gt; }
  std::string text(Style style = Style::Plain) const;
  /// Digest of the <=-oriented form (relation and both sides).
  std::uint64_t hash() const;
};

Inequality make_le(Expr lhs, Expr rhs, AssumptionsPtr asm_, bool strict = false);

/// Checks lhs <= rhs (or the stated relation) at one point with relative
/// slack; domain errors count as "not violated".
bool holds_at(const Inequality& g, const Assignment& at, Real slack = 1e-9);

}  // namespace ineq
