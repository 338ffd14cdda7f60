#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"
#include "ineq/poly.hpp"
#include "ineq/theorem.hpp"

using namespace ineq;

namespace {

AssumptionsPtr positive(const std::vector<std::string>& vars) { return make_assumptions(vars); }

bool has_produced(const std::vector<MatchResult>& rs, const Expr& want, Direction d) {
  for (const auto& r : rs) {
    if (r.direction == d && is_identically_zero(r.produced - want)) return true;
  }
  return false;
}

// Counts sample points where a result contradicts its direction.
int violations(const Expr& original, const MatchResult& r, const std::vector<std::string>& vars, int samples,
               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  int bad = 0;
  for (int i = 0; i < samples; ++i) {
    Assignment at;
    for (const auto& v : vars) at[v] = std::exp(logu(rng));
    try {
      Real a = evaluate(original, at);
      Real b = evaluate(r.produced, at);
      Real slack = 1e-9 * (1 + std::fabs(static_cast<double>(a)) + std::fabs(static_cast<double>(b)));
      if (r.direction == Direction::UpperBound ? a > b + slack : a < b - slack) ++bad;
    } catch (const DomainError&) {
    }
  }
  return bad;
}

}  // namespace

TEST(AmGm, ReciprocalOfSumBecomesUpperBound) {
  auto asm_ = positive({"x", "y", "z"});
  Expr e = parse("x*y*z/(x+y+z)");
  auto rs = match_amgm(e, *asm_, label_monotonicity(e, *asm_));
  EXPECT_TRUE(has_produced(rs, parse("(x*y*z)^(2/3)/3"), Direction::UpperBound));
}

TEST(AmGm, PartitionCountsRespectBudget) {
  auto asm_ = positive({"a", "b", "c", "d", "e", "f", "g"});
  Expr e = parse("a+b+c+d+e+f+g");
  auto rs = match_amgm(e, *asm_, label_monotonicity(e, *asm_));
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_TRUE(is_identically_zero(rs[0].produced - parse("7*(a*b*c*d*e*f*g)^(1/7)")));
  EXPECT_EQ(rs[0].direction, Direction::LowerBound);
}

TEST(AmGm, NonpositiveTermsGiveUpperBound) {
  auto asm_ = positive({"a", "b"});
  Expr e = parse("1-a-b");
  auto rs = match_amgm(e, *asm_, label_monotonicity(e, *asm_));
  EXPECT_TRUE(has_produced(rs, parse("1-2*sqrt(a*b)"), Direction::UpperBound));
}

TEST(WeightedAmGm, MulSiteWithRadical) {
  auto asm_ = positive({"a", "b"});
  Expr e = parse("sqrt(a)*b");
  auto rs = match_weighted_amgm(e, *asm_, label_monotonicity(e, *asm_));
  EXPECT_TRUE(has_produced(rs, parse("(a/3+2*b/3)^(3/2)"), Direction::UpperBound));
}

TEST(Holder, RadicalFormOnCyclicSum) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("a/sqrt(a^2+8*b*c)+b/sqrt(b^2+8*c*a)+c/sqrt(c^2+8*a*b)");
  auto rs = match_holder(e, *asm_, label_monotonicity(e, *asm_));
  EXPECT_TRUE(has_produced(rs, parse("(a+b+c)^(3/2)/sqrt(a^3+b^3+c^3+24*a*b*c)"), Direction::LowerBound));
}

TEST(Holder, PowerFormCancels) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("a^2*b^2/(c*(a+b))+b^2*c^2/(a*(b+c))+c^2*a^2/(b*(c+a))");
  auto rs = match_holder(e, *asm_, label_monotonicity(e, *asm_));
  bool found = false;
  for (const auto& r : rs) found = found || r.produced == parse("a*b/2+b*c/2+c*a/2");
  EXPECT_TRUE(found);
}

TEST(Holder, IdentityOnRandomInstances) {
  // (sum x_i^(m+1)/y_i^m) * (sum y_i)^m >= (sum x_i)^(m+1) with numbers.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(1, 9);
  int checked = 0;
  for (int m = 1; m <= 3; ++m) {
    for (int n = 2; n <= 4; ++n) {
      for (int trial = 0; trial < 112; ++trial) {
        std::vector<std::string> vars;
        ExprList terms;
        for (int i = 0; i < n; ++i) {
          std::string x = "x" + std::to_string(i);
          std::string y = "y" + std::to_string(i);
          vars.push_back(x);
          vars.push_back(y);
          terms.push_back(constant(pick(rng)) * pow(symbol(x), m + 1) * pow(symbol(y), -m));
        }
        auto asm_ = positive(vars);
        Expr e = add(terms);
        auto rs = match_holder(e, *asm_, label_monotonicity(e, *asm_), {}, m);
        ASSERT_FALSE(rs.empty());
        for (const auto& r : rs) EXPECT_EQ(violations(e, r, vars, 5, rng), 0) << render(r.produced);
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(Jensen, SquareOfSymbolsIsConvex) {
  auto asm_ = positive({"a", "b", "c", "d"});
  Expr e = parse("a^2+b^2+c^2+d^2");
  auto rs = match_jensen(e, *asm_);
  EXPECT_TRUE(has_produced(rs, parse("4*(a/4+b/4+c/4+d/4)^2"), Direction::LowerBound));
}

TEST(Jensen, SquareRootIsConcave) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("sqrt(a+b)+sqrt(b+c)+sqrt(c+a)");
  auto rs = match_jensen(e, *asm_);
  ASSERT_FALSE(rs.empty());
  EXPECT_EQ(rs[0].direction, Direction::UpperBound);
}

TEST(Jensen, OneVariableFormUsesTheTotal) {
  auto asm_ = positive({"a", "b", "c", "d"});
  Expr e = parse("a*(b+c+d)+b*(c+d+a)+c*(d+a+b)+d*(a+b+c)");
  auto rs = match_jensen(e, *asm_);
  EXPECT_TRUE(has_produced(rs, parse("4*(a/4+b/4+c/4+d/4)*(3*a/4+3*b/4+3*c/4+3*d/4)"), Direction::UpperBound));
}

TEST(SimpMuirhead, CubesBecomeMixedTerms) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("1/(a^3+b^3+a*b*c)+1/(b^3+c^3+a*b*c)+1/(c^3+a^3+a*b*c)");
  auto rs = match_simp_muirhead(e, *asm_, label_monotonicity(e, *asm_));
  Expr want = parse("1/(a^2*b+a*b^2+a*b*c)+1/(b^2*c+b*c^2+a*b*c)+1/(c^2*a+c*a^2+a*b*c)");
  bool found = false;
  for (const auto& r : rs) found = found || (r.produced == want && r.direction == Direction::UpperBound);
  EXPECT_TRUE(found);
}

TEST(TangentLine, ConditionedSum) {
  auto asm_ = make_assumptions({"a", "b", "c"}, Domain::Positive, {Condition{parse("a+b+c"), integer(3)}});
  Expr e = parse("1/(a^2-4*a+9)+1/(b^2-4*b+9)+1/(c^2-4*c+9)");
  auto rs = match_tangent_line(e, *asm_);
  ASSERT_FALSE(rs.empty());
  EXPECT_EQ(rs[0].direction, Direction::UpperBound);
  EXPECT_TRUE(is_identically_zero(rs[0].produced - parse("(6+a+b+c)/18")));
}

TEST(Closure, SchurDegreeThree) {
  auto asm_ = positive({"a", "b", "c"});
  EXPECT_TRUE(match_schur(parse("a^3+b^3+c^3+3*a*b*c-a^2*b-a^2*c-b^2*a-b^2*c-c^2*a-c^2*b"), *asm_));
  EXPECT_TRUE(match_schur(parse("2*(a^3+b^3+c^3)+6*a*b*c-a^2*b-a^2*c-b^2*a-b^2*c-c^2*a-c^2*b"), *asm_));
  EXPECT_FALSE(match_schur(parse("a^3+b^3+c^3-3*a^2*b"), *asm_));
}

TEST(Closure, MuirheadMajorization) {
  auto asm_ = positive({"a", "b", "c"});
  EXPECT_TRUE(majorizes({3, 0, 0}, {1, 1, 1}));
  EXPECT_FALSE(majorizes({2, 1, 0}, {3, 0, 0}));
  EXPECT_TRUE(match_muirhead(parse("6*a*b*c"), parse("a^2*b+b^2*c+c^2*a+a*b^2+b*c^2+c*a^2"), *asm_));
  EXPECT_TRUE(match_muirhead(parse("3*a*b*c"), parse("a^3+b^3+c^3"), *asm_));
  EXPECT_FALSE(match_muirhead(parse("a^3+b^3+c^3"), parse("3*a*b*c"), *asm_));
}

TEST(Closure, MuirheadAgreesWithBruteForceOnTwoVariables) {
  auto asm_ = positive({"a", "b"});
  for (int p = 0; p <= 4; ++p) {
    for (int q = 0; q <= 4 - p; ++q) {
      for (int r = 0; r <= 4; ++r) {
        int s = p + q - r;
        if (s < 0 || (p == r && q == s) || (p == s && q == r)) continue;
        Expr lhs = parse("a^" + std::to_string(r) + "*b^" + std::to_string(s) + "+a^" + std::to_string(s) + "*b^" +
                         std::to_string(r));
        Expr rhs = parse("a^" + std::to_string(p) + "*b^" + std::to_string(q) + "+a^" + std::to_string(q) + "*b^" +
                         std::to_string(p));
        bool truth = std::max(p, q) >= std::max(r, s);
        EXPECT_EQ(match_muirhead(lhs, rhs, *asm_).has_value(), truth) << render(lhs) << " <= " << render(rhs);
      }
    }
  }
}

TEST(Closure, AmGmCoverOfCubicRemainder) {
  auto asm_ = positive({"a", "b", "c"});
  Poly p = to_poly(parse("a^3+b^3+c^3-3*a*b*c"));
  auto steps = amgm_cover(p, *asm_);
  ASSERT_TRUE(steps);
  ASSERT_FALSE(steps->empty());
  for (const auto& [m, c] : steps->back()) EXPECT_GE(c, 0);
  EXPECT_FALSE(amgm_cover(to_poly(parse("a^2+b^2-3*a*b")), *asm_));
}

TEST(Closure, AmGmCoverHandlesHigherDegree) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("(a^2+b^2+c^2)^2 - 3*a*b*c*(a+b+c)");
  EXPECT_TRUE(amgm_cover(to_poly(e), *asm_));
}

TEST(Matchers, FuzzedResultsAreSound) {
  std::mt19937_64 rng(3);
  std::vector<std::string> pool = {"a+b", "a*b", "a^2", "1/(a+b)", "sqrt(a*b)", "c/(a+b)", "a^2/b", "b+c",
                                   "1/(b+c)", "c^3", "a*b*c", "sqrt(a+c)"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  auto asm_ = positive({"a", "b", "c"});
  int results = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::string text = pool[pick(rng)] + "+" + pool[pick(rng)] + "+" + pool[pick(rng)];
    if (trial % 3 == 0) text = "1/(" + text + ")";
    if (trial % 3 == 1) text = "(" + text + ")*" + pool[pick(rng)];
    Expr e = parse(text);
    MatchBudget budget;
    budget.max_results = 16;
    for (const auto& r : match_all(e, *asm_, budget)) {
      EXPECT_EQ(violations(e, r, {"a", "b", "c"}, 40, rng), 0) << render(e) << " -> " << render(r.produced) << " by "
                                                                 << r.theorem;
      ++results;
    }
  }
  EXPECT_GT(results, 50);
}

TEST(TangentLine, HomogeneousDegreeZeroSum) {
  auto asm_ = positive({"a", "b", "c"});
  Expr e = parse("(a+b+2*c)^2/(2*c^2+(a+b)^2)+(a+2*b+c)^2/(2*b^2+(a+c)^2)+(2*a+b+c)^2/(2*a^2+(b+c)^2)");
  auto rs = match_tangent_line(e, *asm_);
  ASSERT_FALSE(rs.empty());
  EXPECT_EQ(rs[0].direction, Direction::UpperBound);
  EXPECT_TRUE(is_identically_zero(rs[0].produced - integer(8)));
}
