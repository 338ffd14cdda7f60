#include <gtest/gtest.h>

#include <random>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"
#include "ineq/poly.hpp"
#include "ineq/univariate.hpp"

using namespace ineq;

namespace {

const Interval kUnit{Rational(0), Rational(1)};

UPoly from_roots(const std::vector<Rational>& roots) {
  UPoly p = UPoly::constant(1);
  for (const auto& r : roots) p = p * UPoly({-r, Rational(1)});
  return p;
}

}  // namespace

TEST(UPoly, DivmodReconstructs) {
  UPoly a({1, 2, 3, 4});
  UPoly b({-1, 1});
  auto [q, r] = divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
}

TEST(UPoly, SturmCountsDistinctRoots) {
  UPoly p = from_roots({Rational(1, 3), Rational(1, 2), Rational(2), Rational(2)});
  EXPECT_EQ(count_roots(p, Rational(0), Rational(1)), 2u);
  EXPECT_EQ(count_roots(p, std::nullopt, std::nullopt), 3u);
  EXPECT_EQ(count_roots(p, Rational(1), Rational(3)), 1u);
  EXPECT_EQ(count_roots(UPoly({1, 0, 1}), std::nullopt, std::nullopt), 0u);
}

TEST(UPoly, SquareFreeFactorsRecoverMultiplicities) {
  UPoly p = from_roots({Rational(1), Rational(2), Rational(2), Rational(3), Rational(3), Rational(3)});
  auto f = square_free_factors(p);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], from_roots({Rational(1)}));
  EXPECT_EQ(f[1], from_roots({Rational(2)}));
  EXPECT_EQ(f[2], from_roots({Rational(3)}));
}

TEST(UPoly, SturmAgreesWithBruteForceOnRandomRootSets) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> roots;
    int n = 1 + trial % 5;
    for (int i = 0; i < n; ++i) roots.emplace_back(pick(rng), 2);
    UPoly p = from_roots(roots);
    Rational lo(pick(rng), 3);
    Rational hi = lo + Rational(1 + trial % 4);
    std::set<Rational> distinct;
    for (const auto& r : roots) {
      if (r > lo && r <= hi) distinct.insert(r);
    }
    EXPECT_EQ(count_roots(p, lo, hi), distinct.size());
  }
}

TEST(OneVarCheck, SpecExamples) {
  EXPECT_EQ(one_var_check(integer(0), parse("x*(x-1)^2"), "x", kUnit), Verdict::True);
  EXPECT_EQ(one_var_check(integer(0), parse("(3*x-1)^2*(4*x+1)"), "x", kUnit), Verdict::True);
  EXPECT_EQ(one_var_check(integer(0), parse("x-2"), "x", kUnit), Verdict::False);
  EXPECT_EQ(one_var_check(integer(0), parse("x^x"), "x", kUnit), Verdict::Undecided);
}

TEST(OneVarCheck, DetectsSignChangeInsideInterval) {
  EXPECT_EQ(one_var_check(integer(0), parse("(3*x-1)*(4*x+1)"), "x", kUnit), Verdict::False);
  EXPECT_EQ(one_var_check(integer(0), parse("(3*x-1)^3"), "x", kUnit), Verdict::False);
  EXPECT_EQ(one_var_check(integer(0), parse("(3*x-1)^4/(x+1)"), "x", kUnit), Verdict::True);
  EXPECT_EQ(one_var_check(integer(0), parse("1/(2*x-1)^2"), "x", kUnit), Verdict::False);
}

TEST(TangentLine, UsamoTangent) {
  Expr f = parse("(x+1)^2/((1-x)^2+2*x^2)");
  auto t = tangent_line_check(f, "x", kUnit, Rational(1, 3));
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->upper);
  EXPECT_TRUE(is_identically_zero(t->line - parse("(12*x+4)/3")));
  EXPECT_TRUE(is_identically_zero(t->certificate - parse("-(3*x-1)^2*(4*x+1)/(3*(3*x^2-2*x+1))")));
}

TEST(TangentLine, KoreaTangent) {
  auto t = tangent_line_check(parse("1/(x^2-4*x+9)"), "x", kUnit, Rational(1));
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->upper);
  EXPECT_TRUE(is_identically_zero(t->line - parse("(2+x)/18")));
  EXPECT_TRUE(is_identically_zero(t->certificate - parse("-x*(x-1)^2/(18*(x^2-4*x+9))")));
}

TEST(TangentLine, ConvexSquareIsLowerBound) {
  for (int k : {-2, 0, 1, 5}) {
    auto t = tangent_line_check(parse("x^2"), "x", Interval{}, Rational(k, 2));
    ASSERT_TRUE(t);
    EXPECT_FALSE(t->upper);
  }
}
