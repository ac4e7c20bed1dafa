#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"
#include "ewls/rng.hpp"

using namespace ewls;

TEST(Eoq, CostExamples) {
  EXPECT_DOUBLE_EQ(eoq_cost({1, 1}, 1), 2);
  EXPECT_DOUBLE_EQ(eoq_cost({4, 1}, 2), 4);
  EXPECT_DOUBLE_EQ(eoq_cost({1, 1}, 2), 2.5);
  // C(aT*) + C(T*/a) = (a^2 + 1)/a * C(T*) at a = 2
  EXPECT_DOUBLE_EQ(eoq_cost({1, 1}, 2) + eoq_cost({1, 1}, 0.5), 2.5 * eoq_cost({1, 1}, 1));
  EXPECT_THROW(eoq_cost({1, 1}, 0), DomainError);
  EXPECT_THROW(eoq_cost({1, 1}, -1), DomainError);
}

TEST(Eoq, OptimumExamples) {
  EXPECT_DOUBLE_EQ(eoq_opt({1, 1}), 1);
  EXPECT_DOUBLE_EQ(eoq_opt({4, 1}), 2);
  EXPECT_DOUBLE_EQ(eoq_opt({2, 8}), 0.5);
}

TEST(Eoq, CappedExamples) {
  auto r = capped_eoq({1, 1}, 2);
  EXPECT_DOUBLE_EQ(r.T, 1);
  EXPECT_DOUBLE_EQ(r.cost, 2);
  r = capped_eoq({4, 1}, 1);
  EXPECT_DOUBLE_EQ(r.T, 1);
  EXPECT_DOUBLE_EQ(r.cost, 5);
  r = capped_eoq({1, 1}, 0.5);
  EXPECT_DOUBLE_EQ(r.T, 0.5);
  EXPECT_DOUBLE_EQ(r.cost, 2.5);
  double grid = INFINITY;
  for (int k = 1; k <= 1'000'000; ++k) grid = std::min(grid, eoq_cost({1, 1}, 0.5 * k / 1e6));
  EXPECT_NEAR(r.cost, grid, 1e-12);
  EXPECT_THROW(capped_eoq({1, 1}, 0), DomainError);
}

TEST(Eoq, InvalidParams) {
  EXPECT_THROW(validate({0, 1}), DomainError);
  EXPECT_THROW(validate({1, -1}), DomainError);
}

TEST(Eoq, ConvexityScalingAndMonotoneCap) {
  CounterRng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const EoqParams p{rng.uniform(0.1, 10), rng.uniform(0.1, 10)};
    double T1 = rng.uniform(0.01, 10), T2 = rng.uniform(0.01, 10);
    if (T1 > T2) std::swap(T1, T2);
    const double lam = rng.uniform(0, 1);
    EXPECT_LE(eoq_cost(p, lam * T1 + (1 - lam) * T2), lam * eoq_cost(p, T1) + (1 - lam) * eoq_cost(p, T2) + 1e-9);
    const double a = rng.uniform(0.1, 10);
    EXPECT_LE(eoq_cost(p, a * T1), std::max(a, 1 / a) * eoq_cost(p, T1) * (1 + 1e-12));
    EXPECT_GE(capped_eoq(p, T1).cost, capped_eoq(p, T2).cost);
  }
}
