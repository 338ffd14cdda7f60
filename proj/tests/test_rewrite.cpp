#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"
#include "ineq/poly.hpp"
#include "ineq/rewrite.hpp"

using namespace ineq;

namespace {

Inequality goal(const std::string& lhs, const std::string& rhs, AssumptionsPtr a) {
  return make_le(parse(lhs), parse(rhs), std::move(a));
}

AssumptionsPtr abc() { return make_assumptions({"a", "b", "c"}); }

bool produces(const std::vector<Inequality>& out, const std::string& lhs, const std::string& rhs) {
  Expr l = parse(lhs);
  Expr r = parse(rhs);
  for (const auto& s : out) {
    if (s.lhs == l && s.rhs == r) return true;
  }
  return false;
}

std::string dump(const std::vector<Inequality>& out) {
  std::string s;
  for (const auto& g : out) s += g.text() + "\n";
  return s;
}

}  // namespace

TEST(Rewrite, ZeroSideMovesEverythingRight) {
  auto g = goal("a^3+24*a*b*c+b^3+c^3", "(a+b+c)^3", abc());
  auto out = apply_rule(Rule::ZeroSide, g);
  EXPECT_TRUE(produces(out, "0", "-a^3-24*a*b*c-b^3-c^3+(a+b+c)^3")) << dump(out);
}

TEST(Rewrite, NoPowClearsRadicals) {
  auto g = goal("sqrt(a^3+24*a*b*c+b^3+c^3)", "(a+b+c)^(3/2)", abc());
  auto out = apply_rule(Rule::NoPow, g);
  EXPECT_TRUE(produces(out, "a^3+24*a*b*c+b^3+c^3", "(a+b+c)^3")) << dump(out);
}

TEST(Rewrite, NoPowOnQuotient) {
  auto a = make_assumptions({"a", "b", "c", "d"});
  auto g = goal("1", "(a+b+c+d)^(4/3)/(a^4+252*a*b*c*d+b^4+c^4+d^4)^(1/3)", a);
  auto out = apply_rule(Rule::NoPow, g);
  EXPECT_TRUE(produces(out, "1", "(a+b+c+d)^4/(a^4+252*a*b*c*d+b^4+c^4+d^4)")) << dump(out);
}

TEST(Rewrite, SepNegMovesNegativeTerms) {
  auto a = make_assumptions({"a", "b", "c", "d"});
  auto g = goal("0", "4*a^3*b-216*a*b*c*d+4*a*d^3", a);
  auto out = apply_rule(Rule::SepNeg, g);
  EXPECT_TRUE(produces(out, "216*a*b*c*d", "4*a^3*b+4*a*d^3")) << dump(out);
}

TEST(Rewrite, NodivCrossMultiplies) {
  auto a = make_assumptions({"a", "b", "c", "d"});
  auto g = goal("2/(3*a^2+6*a*b+3*b^2)", "1/(4*a*b+4*c*d)", a);
  auto out = apply_rule(Rule::NodivExpr, g);
  EXPECT_TRUE(produces(out, "8*a*b+8*c*d", "3*a^2+6*a*b+3*b^2")) << dump(out);
  auto h = goal("1/2", "(a+b+c)^3/(27*a*b*c+a*(a+b+c)^2)", abc());
  EXPECT_TRUE(produces(apply_rule(Rule::NodivExpr, h), "27*a*b*c+a*(a+b+c)^2", "2*(a+b+c)^3"));
}

TEST(Rewrite, CyclicMultiplierDividesSharedFactor) {
  auto a = make_assumptions({"a", "b", "c", "d"});
  auto g = goal("(a^2+b^2+c^2+d^2)/3", "(a^2+b^2+c^2+d^2)^2/(a*(b+c+d)+b*(a+c+d)+c*(a+b+d)+d*(a+b+c))", a);
  auto out = apply_rule(Rule::AllCycMulExpr, g);
  EXPECT_TRUE(produces(out, "1/3", "(a^2+b^2+c^2+d^2)/(a*(b+c+d)+b*(a+c+d)+c*(a+b+d)+d*(a+b+c))")) << dump(out);
  auto h = goal("1", "(a+b+c)^(3/2)/sqrt(a^3+24*a*b*c+b^3+c^3)", abc());
  EXPECT_TRUE(produces(apply_rule(Rule::AllCycMulExpr, h), "sqrt(a^3+24*a*b*c+b^3+c^3)", "(a+b+c)^(3/2)"));
}

TEST(Rewrite, CyclicProductOfDenominators) {
  auto g = goal("1", "a/(b+c)+b/(c+a)+c/(a+b)", abc());
  auto m = cyclic_multiplier_candidates(g);
  ASSERT_FALSE(m.empty());
  EXPECT_TRUE(is_identically_zero(m[0] - parse("(a+b)*(b+c)*(c+a)")));
  auto none = goal("a", "b+c", abc());
  EXPECT_TRUE(cyclic_multiplier_candidates(none).empty());
}

TEST(Rewrite, ExpandRightSide) {
  auto g = goal("0", "-a^3-24*a*b*c-b^3-c^3+(a+b+c)^3", abc());
  auto out = apply_rule(Rule::TryExpandR, g);
  EXPECT_TRUE(produces(out, "0", "3*a^2*b+3*a^2*c+3*a*b^2-18*a*b*c+3*a*c^2+3*b^2*c+3*b*c^2")) << dump(out);
}

TEST(Rewrite, TogetherClosesUsamoStep) {
  auto g = goal("1/(a*b*c+b^2*c+b*c^2)+1/(a^2*c+a*b*c+a*c^2)+1/(a^2*b+a*b^2+a*b*c)", "1/(a*b*c)", abc());
  auto out = apply_rule(Rule::TryTogetherL, g);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].lhs, out[0].rhs) << dump(out);
}

TEST(Rewrite, SimpRightCollapsesScalePair) {
  auto a = make_assumptions({"a", "b", "c", "d"});
  auto g = goal("1/3", "(a/4+b/4+c/4+d/4)/(3*a/4+3*b/4+3*c/4+3*d/4)", a);
  auto out = apply_rule(Rule::TrySimpR, g);
  EXPECT_TRUE(produces(out, "1/3", "1/3")) << dump(out);
}

TEST(Rewrite, FactorBothFindsSquares) {
  auto g = goal("0", "2*a^3+4*a^2*b+2*a*b^2", abc());
  auto out = apply_rule(Rule::TryFactorBoth, g);
  EXPECT_TRUE(produces(out, "0", "2*a*(a+b)^2")) << dump(out);
}

TEST(Homogenize, MonomialCondition) {
  auto a = make_assumptions({"a", "b", "c"}, Domain::Positive, {Condition{parse("a*b*c"), integer(1)}});
  auto g = goal("3/2", "1/(a^3*(b+c))+1/(b^3*(c+a))+1/(c^3*(a+b))", a);
  auto out = homogenize(g);
  EXPECT_TRUE(produces(out, "3*a^(2/3)*b^(2/3)*c^(2/3)/2", "b^2*c^2/(a*(b+c))+a^2*c^2/(b*(c+a))+a^2*b^2/(c*(a+b))"))
      << dump(out);
}

TEST(Homogenize, LinearConditionInsideDenominators) {
  auto a = make_assumptions({"a", "b", "c"}, Domain::Positive, {Condition{parse("a+b+c"), integer(1)}});
  auto g = goal("1/2", "a/(9*b*c+4*(b-c)^2+1)+b/(9*c*a+4*(c-a)^2+1)+c/(9*a*b+4*(a-b)^2+1)", a);
  auto out = homogenize(g);
  EXPECT_TRUE(produces(out, "1/2",
                       "a*(a+b+c)/(9*b*c+4*(b-c)^2+(a+b+c)^2)+b*(a+b+c)/(9*c*a+4*(c-a)^2+(a+b+c)^2)+"
                       "c*(a+b+c)/(9*a*b+4*(a-b)^2+(a+b+c)^2)"))
      << dump(out);
}

TEST(Homogenize, BalancedDegreesUnderScaling) {
  auto a = make_assumptions({"a", "b", "c"}, Domain::Positive, {Condition{parse("a*b*c"), integer(1)}});
  auto out = homogenize(goal("a+b+c", "a^2+b^2+c^2", a));
  ASSERT_FALSE(out.empty());
  for (const auto& s : out) {
    std::map<std::string, Expr> scale;
    for (const auto& v : {"a", "b", "c"}) scale[v] = parse("t") * symbol(v);
    Expr l = substitute(s.lhs, scale) / s.lhs;
    Expr r = substitute(s.rhs, scale) / s.rhs;
    EXPECT_TRUE(is_identically_zero(l - r)) << s.text();
  }
  EXPECT_TRUE(homogenize(goal("a+b", "2*c", abc())).empty());
}

TEST(Rewrite, FuzzedApplicationsAreSound) {
  std::mt19937_64 rng(5);
  std::vector<std::string> pool = {"a",       "b*c",        "a^2",       "1/(a+b)", "sqrt(a*b)", "c/(a+b)",
                                   "a^2/b",   "(b+c)^2",    "2*a*b*c",   "3",       "1/2",       "-a*b",
                                   "(a+b)^(3/2)", "a/(b+c)^2", "(a+c)/(b+1)"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  auto a = abc();
  int applications = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::string l = pool[pick(rng)];
    std::string r = pool[pick(rng)];
    if (trial % 2) l += "+" + pool[pick(rng)];
    if (trial % 3) r = "(" + r + ")*" + pool[pick(rng)];
    Inequality g = make_le(parse(l), parse(r), a);
    for (const auto& tag : all_rules()) {
      for (const auto& s : apply_rule(tag.rule, g)) {
        ++applications;
        for (int i = 0; i < 30; ++i) {
          Assignment at{{"a", std::exp(logu(rng))}, {"b", std::exp(logu(rng))}, {"c", std::exp(logu(rng))}};
          bool before = holds_at(g, at);
          bool after = holds_at(s, at);
          if (tag.soundness == Soundness::Equivalence) {
            EXPECT_EQ(before, after) << tag.name << ": " << g.text() << " -> " << s.text();
          } else if (after) {
            EXPECT_TRUE(before) << tag.name << ": " << g.text() << " -> " << s.text();
          }
        }
      }
    }
  }
  EXPECT_GT(applications, 400);
}
