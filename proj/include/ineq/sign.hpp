#pragma once

#include <map>
#include <vector>

#include "ineq/expr.hpp"
#include "ineq/inequality.hpp"

namespace ineq {

enum class Sign { Positive, NonNegative, Zero, NonPositive, Negative, Unknown };

const char* sign_name(Sign s);
bool is_nonneg(Sign s);   // Positive, NonNegative or Zero
bool is_nonpos(Sign s);   // Negative, NonPositive or Zero
Sign negate(Sign s);

/// Sound sign verdict under the assumptions. Syntactic rules first; when
/// they fail, the expanded form is inspected term by term and finally
/// ordering facts are tried in combinations of at most two.
Sign infer_sign(const Expr& e, const AssumptionSet& asm_);

/// Syntactic rules only (no expansion, no facts); cheap.
Sign syntactic_sign(const Expr& e, const AssumptionSet& asm_);

/// Direction in which the root moves when a node grows.
enum class Mono : int { Dec = -1, None = 0, Inc = 1 };

inline Mono operator*(Mono a, Mono b) { return static_cast<Mono>(static_cast<int>(a) * static_cast<int>(b)); }

using Path = std::vector<std::size_t>;

struct MonotoneLabeling {
  std::map<Path, Mono> labels;
  Mono at(const Path& p) const {
    auto it = labels.find(p);
    return it == labels.end() ? Mono::None : it->second;
  }
};

/// Labels every node of `root`: +1 when increasing the node (siblings
/// fixed) cannot decrease the root, -1 when it cannot increase it, None
/// otherwise. None propagates to all descendants.
MonotoneLabeling label_monotonicity(const Expr& root, const AssumptionSet& asm_);

/// Calls f(path, node, label) for every node in pre-order.
template <class F>
void for_each_node(const Expr& e, Path& path, F&& f) {
  f(static_cast<const Path&>(path), e);
  for (std::size_t i = 0; i < e.operands().size(); ++i) {
    path.push_back(i);
    for_each_node(e.operands()[i], path, f);
    path.pop_back();
  }
}

}  // namespace ineq
