#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ineq/inequality.hpp"
#include "ineq/poly.hpp"
#include "ineq/rewrite.hpp"
#include "ineq/theorem.hpp"

namespace ineq {

/// How a goal was derived from its parent.
struct Derivation {
  enum class Kind { Root, Rule, TheoremLhs, TheoremRhs };
  Kind kind = Kind::Root;
  std::string name;       // rule name or theorem name
  std::string statement;  // instantiated theorem, when there is one
};

struct Goal {
  Inequality target;
  Derivation derivation;
  int parent = -1;  // index into the search arena
  int depth = 0;
  int tree_depth = 0;       // max tree depth of the two sides
  std::size_t length = 0;   // plain rendering length
  std::uint64_t hash = 0;   // of the <=-oriented target
};

Goal make_goal(Inequality target, Derivation d = {}, int parent = -1, int depth = 0);

/// Why a goal is closed without further search.
struct Certificate {
  std::string method;  // equal, nonneg_poly, AM_GM, weighted_AM_GM, AM_GM_cover, schur, Muirhead, one_var
  std::string detail;
  std::vector<Poly> steps;  // AM-GM cover remainders
};

/// The four-case decision ladder.
std::optional<Certificate> is_trivially_true(const Inequality& g, const MatchBudget& budget = {});

/// A satisfying assignment where g fails by more than `margin` (relative),
/// or nullopt after `samples` draws.
std::optional<Assignment> falsify(const Inequality& g, int samples = 200, double margin = 1e-6,
                                  std::uint64_t seed = 1);

/// Draws one point satisfying the assumptions (domains, one homogeneous or
/// one-dimensional-solvable condition, facts); nullopt when it gives up.
std::optional<Assignment> sample_point(const AssumptionSet& asm_, std::mt19937_64& rng);

struct ExpansionOptions {
  MatchBudget budget;
  RuleRegistry rules = RuleRegistry::defaults();
  bool theorems = true;
};

/// Successor goals of g (homogenization, theorem bounds on both sides, rules),
/// deduplicated by hash, in a deterministic order.
std::vector<Goal> generate_subgoals(const Goal& g, const ExpansionOptions& opts = {});

/// Lower scores are expanded first.
using Heuristic = std::function<double(const Inequality&)>;

struct SearchLimits {
  double seconds = 90 * 60;
  std::size_t max_expansions = 1000000;
  std::size_t max_open = 200000;
  int falsify_samples = 200;
  double homo_bonus = 1.0;  // subtracted from try_homo successors' scores
  std::uint64_t seed = 1;
};

struct MctsConfig {
  std::size_t k = 5;
  double c = 0.3 * 1.4142135623730951;
  int lookahead = 2;
};

double ucb_score(double value, double parent_visits, double visits, double c);

struct ProofStep {
  Inequality goal;       // goal after this step
  Derivation derivation;
};

struct ProofTree {
  Inequality root;
  std::vector<ProofStep> steps;
  Certificate certificate;
  /// Steps as counted in the traces: derivations plus a closing check that
  /// is not plain equality.
  std::size_t length() const { return steps.size() + (certificate.method == "equal" ? 0 : 1); }
};

struct SearchStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::size_t pruned = 0;
  std::size_t open_size = 0;
  double elapsed = 0;
  bool timed_out = false;
  std::vector<std::uint64_t> expanded_hashes;  // in expansion order
};

struct SearchResult {
  std::optional<ProofTree> proof;
  SearchStats stats;
  std::vector<Goal> arena;       // every goal created
  std::vector<int> proof_path;   // arena indices root..terminal when solved
};

SearchResult best_first_search(const Inequality& root, const Heuristic& h, const SearchLimits& lim,
                               const ExpansionOptions& opts = {});
SearchResult bfs_search(const Inequality& root, const SearchLimits& lim, const ExpansionOptions& opts = {});
SearchResult mcts_search(const Inequality& root, const Heuristic& h, const MctsConfig& cfg, const SearchLimits& lim,
                         const ExpansionOptions& opts = {});

/// Trace-style text of a proof.
std::string render_proof(const ProofTree& p);

/// Re-derives every step and re-checks the terminal certificate.
bool replay(const ProofTree& p, const ExpansionOptions& opts = {});

}  // namespace ineq
