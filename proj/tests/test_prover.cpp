#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ineq/benchmark.hpp"
#include "ineq/heuristics.hpp"
#include "ineq/io.hpp"
#include "ineq/prover.hpp"
#include "checks.hpp"

using namespace ineq;

namespace {

Inequality goal_of(const std::string& id) {
  auto p = find_problem(id);
  EXPECT_TRUE(p && p->goal) << id;
  return *p->goal;
}

std::vector<std::string> step_names(const ProofTree& p) {
  std::vector<std::string> out;
  for (const auto& s : p.steps) out.push_back(s.derivation.name);
  return out;
}

SearchLimits limits(double seconds) {
  SearchLimits lim;
  lim.seconds = seconds;
  return lim;
}

Inequality relation_goal(const std::string& text, const std::vector<std::string>& vars,
                         const std::vector<std::string>& conds = {}, Domain d = Domain::Positive) {
  return *make_problem(text, vars, d, conds).goal;
}

}  // namespace

// --- golden proofs ----------------------------------------------------------

TEST(Golden, UsamoFractionSumIsMuirheadThenTogether) {
  auto r = best_first_search(goal_of("05"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  EXPECT_EQ(step_names(*r.proof), std::vector<std::string>{"Muirhead"});
  EXPECT_EQ(r.proof->certificate.method, "together");
  EXPECT_EQ(r.proof->length(), 2u);
  EXPECT_TRUE(replay(*r.proof));
  std::string text = render_proof(*r.proof);
  EXPECT_NE(text.find("by <function check_SimpMuirhead>, it remains to prove"), std::string::npos);
  EXPECT_NE(text.find("by <function try_together_l>, this is true!"), std::string::npos);
}

TEST(Golden, ReciprocalCubesAreHomogenizedThenHolderThenAmGm) {
  auto r = best_first_search(goal_of("03"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  EXPECT_EQ(step_names(*r.proof), (std::vector<std::string>{"try_homo", "Holder"}));
  EXPECT_EQ(r.proof->certificate.method, "AM_GM");
  EXPECT_EQ(r.proof->length(), 3u);
  EXPECT_TRUE(replay(*r.proof));
}

TEST(Golden, RadicalSumIsHolderThenPolynomial) {
  auto r = best_first_search(goal_of("08"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  ASSERT_FALSE(r.proof->steps.empty());
  EXPECT_EQ(r.proof->steps.front().derivation.name, "Holder");
  // After Hölder the remaining goal is radical-free after finitely many
  // rewrites and closes as a polynomial.
  const Inequality& last = r.proof->steps.back().goal;
  EXPECT_EQ(render(last.lhs), "0");
  EXPECT_TRUE(replay(*r.proof));
}

TEST(Golden, AmGmPairNeedsAtMostOneStep) {
  auto g = relation_goal("a+b >= 2*sqrt(a*b)", {"a", "b"});
  auto r = best_first_search(g, tree_depth_score, limits(60));
  ASSERT_TRUE(r.proof);
  EXPECT_LE(r.proof->length(), 1u);
}

// --- search discipline ------------------------------------------------------

TEST(Search, NoGoalIsExpandedTwice) {
  SearchLimits lim = limits(600);
  lim.max_expansions = 12;
  for (const char* id : {"02", "07"}) {
    auto r = best_first_search(goal_of(id), tree_depth_score, lim);
    std::set<std::uint64_t> seen(r.stats.expanded_hashes.begin(), r.stats.expanded_hashes.end());
    EXPECT_EQ(seen.size(), r.stats.expanded_hashes.size()) << id;
    auto b = bfs_search(goal_of(id), lim);
    std::set<std::uint64_t> seen_b(b.stats.expanded_hashes.begin(), b.stats.expanded_hashes.end());
    EXPECT_EQ(seen_b.size(), b.stats.expanded_hashes.size()) << id;
  }
}

TEST(Search, SameSeedSameExpansionOrder) {
  SearchLimits lim = limits(600);
  lim.max_expansions = 10;
  auto a = best_first_search(goal_of("02"), tree_depth_score, lim);
  auto b = best_first_search(goal_of("02"), tree_depth_score, lim);
  EXPECT_EQ(a.stats.expanded_hashes, b.stats.expanded_hashes);
  auto m1 = mcts_search(goal_of("02"), tree_depth_score, {}, lim);
  auto m2 = mcts_search(goal_of("02"), tree_depth_score, {}, lim);
  EXPECT_EQ(m1.stats.expanded_hashes, m2.stats.expanded_hashes);
}

TEST(Search, ZeroTimeLimitReturnsUnsolved) {
  auto r = best_first_search(goal_of("06"), tree_depth_score, limits(0));
  EXPECT_FALSE(r.proof);
  EXPECT_TRUE(r.stats.timed_out);
}

TEST(Search, ProofPathFollowsParents) {
  auto r = best_first_search(goal_of("03"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  ASSERT_FALSE(r.proof_path.empty());
  EXPECT_EQ(r.proof_path.front(), 0);
  for (std::size_t i = 1; i < r.proof_path.size(); ++i)
    EXPECT_EQ(r.arena[r.proof_path[i]].parent, r.proof_path[i - 1]);
}

TEST(Search, BfsAndMctsProveTheShortProblems) {
  for (const char* id : {"05", "09"}) {
    EXPECT_TRUE(bfs_search(goal_of(id), limits(120)).proof) << id;
    EXPECT_TRUE(mcts_search(goal_of(id), tree_depth_score, {}, limits(120)).proof) << id;
  }
}

TEST(Mcts, UcbMatchesWorkedValue) {
  EXPECT_NEAR(ucb_score(0.5, 10, 2, 0.3 * std::sqrt(2.0)), 0.9552, 5e-5);
  EXPECT_TRUE(std::isinf(ucb_score(0.5, 10, 0, 0.3)));
}

// --- decision ladder --------------------------------------------------------

TEST(Ladder, ClosesTheFourCases) {
  auto c1 = is_trivially_true(relation_goal("a*b <= b*a", {"a", "b"}));
  ASSERT_TRUE(c1);
  EXPECT_EQ(c1->method, "equal");
  auto c2 = is_trivially_true(relation_goal("0 <= a^2*b + 3*c", {"a", "b", "c"}));
  ASSERT_TRUE(c2);
  EXPECT_EQ(c2->method, "nonneg_poly");
  auto c3 = is_trivially_true(relation_goal("0 <= a^2 + b^2 - 2*a*b", {"a", "b"}));
  ASSERT_TRUE(c3);
  auto c4 = is_trivially_true(relation_goal("3*(a*b*c)^(1/3) <= a + b + c", {"a", "b", "c"}));
  ASSERT_TRUE(c4);
  EXPECT_EQ(c4->method, "AM_GM");
  auto schur = is_trivially_true(
      relation_goal("0 <= a^3 + b^3 + c^3 + 3*a*b*c - a^2*b - a^2*c - b^2*a - b^2*c - c^2*a - c^2*b", {"a", "b", "c"}));
  ASSERT_TRUE(schur);
  EXPECT_EQ(schur->method, "schur");
}

TEST(Ladder, DoesNotCloseFalseGoals) {
  EXPECT_FALSE(is_trivially_true(relation_goal("0 <= a^2 - 3*a*b + b^2", {"a", "b"})));
  EXPECT_FALSE(is_trivially_true(relation_goal("a + b <= 2*sqrt(a*b)", {"a", "b"})));
  EXPECT_FALSE(is_trivially_true(relation_goal("1 < 1", {"a"})));
}

// --- falsification ----------------------------------------------------------

TEST(Falsify, FindsCounterexamples) {
  auto g = relation_goal("a + b <= 2*sqrt(a*b)", {"a", "b"});
  auto at = falsify(g);
  ASSERT_TRUE(at);
  EXPECT_FALSE(holds_at(g, *at, 1e-6));
  EXPECT_TRUE(falsify(relation_goal("a*b*c <= 1/2", {"a", "b", "c"}, {"a*b*c = 1"})));
  EXPECT_TRUE(falsify(relation_goal("a <= 1/2", {"a", "b", "c"}, {"a+b+c = 1"})));
}

TEST(Falsify, SamplesLieOnConditions) {
  auto g = relation_goal("a <= 1", {"a", "b", "c"}, {"a+b+c = 1"});
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto at = sample_point(*g.assumptions, rng);
    ASSERT_TRUE(at);
    EXPECT_NEAR(static_cast<double>(at->at("a") + at->at("b") + at->at("c")), 1.0, 1e-9);
  }
  auto h = relation_goal("a <= 1", {"a", "b", "c"}, {"a*b + b*c + c*a = 1"});
  for (int i = 0; i < 50; ++i) {
    auto at = sample_point(*h.assumptions, rng);
    ASSERT_TRUE(at);
    Real a = at->at("a"), b = at->at("b"), c = at->at("c");
    EXPECT_NEAR(static_cast<double>(a * b + b * c + c * a), 1.0, 1e-7);
  }
}

// Every intermediate goal of the ten reference solutions is true, so none
// may be pruned.
TEST(Falsify, NeverRejectsReferenceSubgoals) {
  auto t = checks::prune_safety(2000);
  EXPECT_GE(t.checked, 40u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}

// --- expansion and rendering ------------------------------------------------

TEST(Expansion, SubgoalsAreDistinctAndLinked) {
  Goal root = make_goal(goal_of("08"));
  auto kids = generate_subgoals(root);
  ASSERT_FALSE(kids.empty());
  std::set<std::uint64_t> hashes;
  for (const auto& k : kids) {
    EXPECT_TRUE(hashes.insert(k.hash).second);
    EXPECT_EQ(k.depth, 1);
    EXPECT_NE(k.hash, root.hash);
  }
  bool holder = false;
  for (const auto& k : kids) holder |= k.derivation.name == "Holder";
  EXPECT_TRUE(holder);
}

TEST(Render, TheoremStepsShowTheInstance) {
  auto r = best_first_search(goal_of("08"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  std::string text = render_proof(*r.proof);
  EXPECT_EQ(text.rfind("To prove\n", 0), 0u);
  EXPECT_NE(text.find("we use Hölder's inequality:\n"), std::string::npos);
  EXPECT_NE(text.find("by <function check_Holder>, it remains to prove\n"), std::string::npos);
  EXPECT_NE(text.find(", this is true!\n"), std::string::npos);
}

TEST(Replay, RejectsTamperedProofs) {
  auto r = best_first_search(goal_of("03"), tree_depth_score, limits(600));
  ASSERT_TRUE(r.proof);
  ProofTree bad = *r.proof;
  bad.steps[0].derivation.name = "nodiv";
  EXPECT_FALSE(replay(bad));
  ProofTree skipped = *r.proof;
  skipped.steps.erase(skipped.steps.begin());
  EXPECT_FALSE(replay(skipped));
}
