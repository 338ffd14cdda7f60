#include <gtest/gtest.h>

#include "checks.hpp"

using namespace ineq;

TEST(Properties, MonotonicityLabelsAgreeWithFiniteDifferences) {
  auto t = checks::labeling_contradictions(200, 20, 5);
  EXPECT_GT(t.checked, 1000u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}

TEST(Properties, MatchResultsHoldAtRandomPoints) {
  auto t = checks::matcher_soundness(500, 50, 6);
  EXPECT_EQ(t.checked, 500u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}

TEST(Properties, HolderInstancesAreSound) {
  auto t = checks::holder_identity(90, 7);
  EXPECT_GE(t.checked, 90u);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}

TEST(Properties, RelabelMatchesOracle) {
  auto t = checks::relabel_agreement(2000, 8);
  EXPECT_EQ(t.failures, 0u) << t.first_failure;
}
