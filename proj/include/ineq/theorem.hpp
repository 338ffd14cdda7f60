#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ineq/expr.hpp"
#include "ineq/inequality.hpp"
#include "ineq/poly.hpp"
#include "ineq/sign.hpp"

namespace ineq {

/// How the produced expression relates to the matched one: UpperBound
/// means matched <= produced on the whole domain.
enum class Direction { UpperBound, LowerBound };

const char* direction_name(Direction d);

struct MatchBudget {
  double seconds = 2.0;            // wall-clock cap per theorem per call
  std::size_t max_results = 64;    // candidate cap
  std::size_t max_subset_set = 4;  // sets up to this size also drop unused elements
  std::size_t max_partition_set = 6;
  std::size_t max_blocks = 4;
};

struct MatchResult {
  std::string theorem;
  Path site;
  Direction direction = Direction::LowerBound;
  Expr replacement;  // bound for the site
  Expr produced;     // whole expression after the replacement
  std::vector<std::pair<Expr, Expr>> equality_condition;
  std::string statement;  // instantiated theorem, for proof rendering
  double budget_used = 0;
  bool partial = false;  // budget ran out before enumeration finished
};

/// AM-GM at Add sites labeled +-1, over partitions of the nonnegative and
/// nonpositive operand sets.
std::vector<MatchResult> match_amgm(const Expr& e, const AssumptionSet& asm_, const MonotoneLabeling& labels,
                                    const MatchBudget& budget = {});

/// Weighted AM-GM: sum w_i x_i >= W prod x_i^(w_i/W) at Add sites, and the
/// reverse reading prod x_i^w_i <= (sum (w_i/s) x_i)^s at Mul sites that
/// carry a radical.
std::vector<MatchResult> match_weighted_amgm(const Expr& e, const AssumptionSet& asm_,
                                             const MonotoneLabeling& labels, const MatchBudget& budget = {});

/// Hölder in the forms sum c_i d_i^(-1/m) >= (sum c)^((m+1)/m) (sum c d)^(-1/m)
/// and sum x_i^(m+1)/y_i^m >= (sum x)^(m+1)/(sum y)^m. `m` unset tries 1..3.
std::vector<MatchResult> match_holder(const Expr& e, const AssumptionSet& asm_, const MonotoneLabeling& labels,
                                      const MatchBudget& budget = {}, std::optional<int> m = std::nullopt);

/// Jensen over a one-hole template found by anti-unification of the
/// summands (or a one-variable form f(v, sum of variables)).
std::vector<MatchResult> match_jensen(const Expr& e, const AssumptionSet& asm_, const MatchBudget& budget = {});

/// Muirhead as a site rewrite: an orbit of monomials inside a labeled Add is
/// replaced by its one-step Robin-Hood transfer, simultaneously at the
/// cyclic images of the site.
std::vector<MatchResult> match_simp_muirhead(const Expr& e, const AssumptionSet& asm_,
                                             const MonotoneLabeling& labels, const MatchBudget& budget = {});

/// Tangent-line trick on a cyclic sum of one-variable terms.
std::vector<MatchResult> match_tangent_line(const Expr& e, const AssumptionSet& asm_,
                                            const MatchBudget& budget = {});

/// All site matchers on one side, deterministic order.
std::vector<MatchResult> match_all(const Expr& e, const AssumptionSet& asm_, const MatchBudget& budget = {});

/// p >= 0 via lambda * sum a^t (a-b)(a-c) + r, r certified nonnegative.
std::optional<MatchResult> match_schur(const Expr& p, const AssumptionSet& asm_);

/// lhs <= rhs for single symmetric orbits related by majorization.
std::optional<MatchResult> match_muirhead(const Expr& lhs, const Expr& rhs, const AssumptionSet& asm_);

/// True when exponent vector `a` majorizes `b` (same total).
bool majorizes(std::vector<Rational> a, std::vector<Rational> b);

/// Greedy AM-GM covering of the negative monomials of p by groups of 2..4
/// positive monomials. Returns the successive remainders (last one has no
/// negative coefficients) or nullopt.
std::optional<std::vector<Poly>> amgm_cover(const Poly& p, const AssumptionSet& asm_);

/// Sum of the orbit terms of t(a,b,c) under all permutations of the three
/// symbols, i.e. the Schur form sum a^t (a-b)(a-c) expanded.
Poly schur_poly(int t, const std::vector<std::string>& vars);

/// Picks a symbol name not occurring in `e`.
std::string fresh_symbol(const Expr& e, const std::string& hint);

/// One level of distribution: c * (u + v) * w -> c*u*w + c*v*w.
Expr distribute_once(const Expr& term);

}  // namespace ineq
