#include "lobeq/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

namespace lobeq {
namespace {

TEST(Bisection, FindsRootOfDecreasingLine) {
  const auto res = bisect_decreasing([](double x) { return 3.0 - x; }, 0.0, 1.0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.root, 3.0, 3e-12);
}

TEST(Bisection, ExpandsUpperBracketByDoubling) {
  const auto res = bisect_decreasing([](double x) { return 1e6 - x; }, 1.0, 2.0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.root, 1e6, 1e-5);
}

TEST(Bisection, RejectsBadBrackets) {
  EXPECT_THROW(bisect_decreasing([](double x) { return -x; }, 1.0, 2.0), std::domain_error);
  EXPECT_THROW(bisect_decreasing([](double x) { return 1.0 - x; }, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(bisect_decreasing([](double) { return 1.0; }, 1.0, 2.0), std::runtime_error);
}

TEST(Bisection, HandlesKinkedFunctions) {
  // max(x, c) style kinks appear in the emax equations.
  auto fn = [](double x) { return std::max(0.5 / x, 1.0) - 1.2; };
  const auto res = bisect_decreasing(fn, 1e-3, 1e-2);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.root, 0.5 / 1.2, 1e-12);
}

TEST(Bisection, IterationCapReportsNonConvergence) {
  BisectionOptions opts;
  opts.max_iter = 3;
  const auto res = bisect_decreasing([](double x) { return 1.0 - x; }, 0.0, 4.0, opts);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 3);
}

}  // namespace
}  // namespace lobeq
