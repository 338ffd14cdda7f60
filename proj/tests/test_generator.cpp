#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ineq/calculus.hpp"
#include "ineq/generator.hpp"
#include "ineq/io.hpp"
#include "ineq/prover.hpp"

using namespace ineq;

namespace {

GeneratorConfig small_config(std::size_t premises = 4) {
  GeneratorConfig cfg;
  cfg.premises = premises;
  cfg.seed = 7;
  return cfg;
}

bool contains_text(const std::vector<Expr>& xs, const std::string& text) {
  Expr want = parse(text);
  for (const auto& x : xs)
    if (is_identically_zero(x - want)) return true;
  return false;
}

}  // namespace

TEST(Premises, CyclicSumsOfCombinedVariables) {
  GeneratorConfig cfg;
  cfg.premise_loops = 1;
  auto ps = gen_premises(cfg);
  EXPECT_TRUE(contains_text(ps, "a + b + c"));
  EXPECT_TRUE(contains_text(ps, "a*b + b*c + c*a"));
  EXPECT_TRUE(contains_text(ps, "a/b + b/c + c/a"));
  EXPECT_TRUE(contains_text(ps, "a^2 + b^2 + c^2"));
  EXPECT_TRUE(contains_text(ps, "sqrt(a^2 + 2*b*c) + sqrt(b^2 + 2*c*a) + sqrt(c^2 + 2*a*b)"));
  std::set<std::uint64_t> hashes;
  for (const auto& p : ps) EXPECT_TRUE(hashes.insert(p.hash()).second) << render(p);
  cfg.premise_loops = 2;
  EXPECT_GT(gen_premises(cfg).size(), ps.size());
}

TEST(Generation, ZeroLoopsGivesSeedsOnly) {
  GeneratorConfig cfg;
  cfg.loops = 0;
  auto rs = generate_theorems(parse("a + b + c"), cfg);
  ASSERT_FALSE(rs.empty());
  bool amgm = false;
  for (const auto& r : rs) {
    EXPECT_EQ(r.inference_depth, 1);
    EXPECT_EQ(r.chain.front().kind, "seed");
    Inequality g = record_inequality(r);
    amgm |= is_identically_zero(g.lhs - parse("3*(a*b*c)^(1/3)")) && is_identically_zero(g.rhs - parse("a+b+c"));
  }
  EXPECT_TRUE(amgm);
}

TEST(Generation, RecordsAreValidAndReplay) {
  auto rs = generate_dataset(small_config());
  ASSERT_GE(rs.size(), 50u);
  std::mt19937_64 rng(1);
  std::shuffle(rs.begin(), rs.end(), rng);
  rs.resize(60);
  for (const auto& r : rs) {
    Inequality g = record_inequality(r);
    EXPECT_TRUE(numerically_valid(g, 100, 99)) << r.inequality;
    Assignment at;
    for (const auto& [k, v] : r.equality_point) at[k] = v;
    EXPECT_TRUE(check_equality_condition(g, at)) << r.inequality;
    EXPECT_TRUE(replay_record(r)) << r.inequality;
    EXPECT_EQ(r.inference_depth, static_cast<int>(r.chain.size()));
    EXPECT_EQ(r.length, r.inequality.size());
  }
}

TEST(Generation, DeeperLoopsReachDeeperRecords) {
  auto cfg = small_config(3);
  cfg.loops = 3;
  int deepest = 0;
  for (const auto& r : generate_dataset(cfg)) deepest = std::max(deepest, r.inference_depth);
  EXPECT_EQ(deepest, 4);
}

TEST(Generation, SameSeedSameDataset) {
  auto a = generate_dataset(small_config(2));
  auto b = generate_dataset(small_config(2));
  EXPECT_EQ(a, b);
  auto cfg = small_config(2);
  cfg.workers = 2;
  EXPECT_EQ(generate_dataset(cfg), a);
}

TEST(Generation, TamperedChainFailsReplay) {
  auto rs = generate_dataset(small_config(2));
  ASSERT_FALSE(rs.empty());
  TheoremRecord r = rs.back();
  r.chain.back().name = "Schur";
  EXPECT_FALSE(replay_record(r));
  TheoremRecord s = rs.back();
  s.inequality = "a <= a + b";
  EXPECT_FALSE(replay_record(s));
}

TEST(Validation, RejectsFalseStatements) {
  auto asm_ = make_assumptions({"a", "b", "c"});
  Inequality bad = make_le(parse("a + b + c"), parse("3*(a*b*c)^(1/3)"), asm_);
  EXPECT_FALSE(numerically_valid(bad, 100, 1));
  EXPECT_TRUE(check_equality_condition(bad, default_equality_point(bad)));
  Inequality off = make_le(parse("a"), parse("a + b"), asm_);
  EXPECT_FALSE(check_equality_condition(off, default_equality_point(off)));
}

TEST(Dedup, ByHashThenByFingerprint) {
  TheoremRecord r;
  r.vars = {"a", "b", "c"};
  r.inequality = "a*(b + c) <= a^2 + b^2 + c^2";
  TheoremRecord same_text = r;
  TheoremRecord same_values = r;
  same_values.inequality = "a*b + a*c <= a^2 + b^2 + c^2";
  TheoremRecord other = r;
  other.inequality = "a*b <= a^2 + b^2";
  auto out = dedup({r, same_text, same_values, other});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].inequality, other.inequality);
}

TEST(Persistence, RoundTripAndErrors) {
  auto rs = generate_dataset(small_config(2));
  std::stringstream ss;
  persist(rs, ss);
  auto back = load(ss);
  EXPECT_EQ(back, rs);
  std::istringstream bad("\n{\"id\": \"x\"}\n");
  try {
    load(bad);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream junk("not json\n");
  EXPECT_THROW(load(junk), DatasetError);
}

TEST(Stats, HistogramsCountEveryRecord) {
  auto rs = generate_dataset(small_config(2));
  auto st = stats(rs);
  EXPECT_EQ(st.total, rs.size());
  std::size_t n = 0;
  for (const auto& [k, v] : st.inference_depth) n += v;
  EXPECT_EQ(n, rs.size());
  n = 0;
  for (const auto& [k, v] : st.length) {
    EXPECT_EQ(k % 20, 0);
    n += v;
  }
  EXPECT_EQ(n, rs.size());
  EXPECT_NE(stats_text(st).find("inference depth"), std::string::npos);
  EXPECT_EQ(stats_table(st).find('\t') != std::string::npos, true);
}
