#include <gtest/gtest.h>

#include "ineq/calculus.hpp"
#include "ineq/io.hpp"
#include "ineq/poly.hpp"

using namespace ineq;

TEST(Smoke, RenderRoundTripsAndRewritesPreserveValue) {
  for (const char* s : {"a*b*c/(a+b+c)", "3/2", "sqrt(a^2+8*b*c)", "(x*y*z)^(2/3)/3", "a + b", "sqrt(a*b)",
                        "1/(c^3*(a+b))", "(a+b+c)^3 - (a^3+24*a*b*c+b^3+c^3)", "2/(3*(a+b+c+d)^2)"}) {
    Expr e = parse(s);
    EXPECT_EQ(parse(render(e)), e) << s;
    EXPECT_EQ(parse(render(expand(e))), expand(e)) << s;
    EXPECT_EQ(parse(render(together(e))), together(e)) << s;
  }
  Expr t = parse("(3*a+2*b+2*c)/(18*a+18*b+18*c) + (2*a+3*b+2*c)/(18*a+18*b+18*c) + (2*a+2*b+3*c)/(18*a+18*b+18*c)");
  EXPECT_EQ(render(together(t)), "7/18");
}
