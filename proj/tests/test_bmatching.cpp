#include <gtest/gtest.h>

#include <cmath>

#include "ewls/bmatching.hpp"
#include "ewls/errors.hpp"
#include "ewls/rng.hpp"

using namespace ewls;

namespace {

// Exhaustive oracle over all right^left assignments.
std::optional<double> brute_force(const MatchingProblem& p) {
  const std::size_t n = p.left.size(), k = p.right.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k;
  std::optional<double> best;
  std::vector<long> deg(k);
  for (std::size_t code = 0; code < total; ++code) {
    std::fill(deg.begin(), deg.end(), 0);
    double w = 0;
    std::size_t x = code;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const std::size_t r = x % k;
      x /= k;
      ++deg[r];
      if (std::isinf(p.weights[i][r])) ok = false;
      w += p.weights[i][r];
    }
    for (std::size_t r = 0; r < k && ok; ++r) ok = deg[r] >= p.bounds[r].first && deg[r] <= p.bounds[r].second;
    if (ok && (!best || w < *best)) best = w;
  }
  return best;
}

MatchingProblem random_problem(CounterRng& rng, std::size_t n, std::size_t k) {
  MatchingProblem p;
  for (std::size_t i = 0; i < n; ++i) p.left.push_back(static_cast<int>(i));
  for (std::size_t r = 0; r < k; ++r) p.right.push_back(static_cast<int>(r));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (std::size_t r = 0; r < k; ++r) row.push_back(rng.uniform01() < 0.1 ? kNoEdge : rng.uniform(0, 10));
    p.weights.push_back(row);
  }
  for (std::size_t r = 0; r < k; ++r) {
    const long lo = static_cast<long>(rng.uniform(0, 3));
    p.bounds.emplace_back(lo, lo + static_cast<long>(rng.uniform(0, static_cast<double>(n))));
  }
  return p;
}

}  // namespace

TEST(BMatching, ForcedSingleClass) {
  MatchingProblem p{{0, 1}, {7}, {{1.5}, {2.5}}, {{2, 2}}};
  const auto r = bmatching_min_cost(p);
  EXPECT_DOUBLE_EQ(r.weight, 4.0);
  EXPECT_EQ(r.assignment, (std::vector<int>{0, 0}));
  EXPECT_TRUE(r.certified);
}

TEST(BMatching, DiagonalPreferred) {
  MatchingProblem p{{0, 1, 2, 3}, {0, 1}, {{1, 5}, {1, 5}, {5, 1}, {5, 1}}, {{2, 2}, {2, 2}}};
  const auto r = bmatching_min_cost(p);
  EXPECT_DOUBLE_EQ(r.weight, 4.0);
  EXPECT_EQ(r.assignment, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(r.weight, *brute_force(p));
}

TEST(BMatching, LowerBoundsForceExpensiveEdges) {
  MatchingProblem p{{0, 1, 2}, {0, 1}, {{1, 9}, {1, 9}, {1, 9}}, {{0, 3}, {1, 3}}};
  EXPECT_DOUBLE_EQ(bmatching_min_cost(p).weight, 11.0);
}

TEST(BMatching, InfeasibleBoundsThrow) {
  MatchingProblem p{{0, 1, 2}, {0, 1}, {{1, 1}, {1, 1}, {1, 1}}, {{0, 1}, {0, 1}}};
  EXPECT_THROW(bmatching_min_cost(p), MatchingInfeasible);
  p.bounds = {{2, 3}, {2, 3}};
  EXPECT_THROW(bmatching_min_cost(p), MatchingInfeasible);
  MatchingProblem q{{0}, {0, 1}, {{kNoEdge, kNoEdge}}, {{0, 1}, {0, 1}}};
  EXPECT_THROW(bmatching_min_cost(q), MatchingInfeasible);
}

TEST(BMatching, MatchesBruteForce) {
  CounterRng rng(47);
  int checked = 0;
  for (int t = 0; t < 600; ++t) {
    const auto p = random_problem(rng, 1 + t % 8, 1 + t % 3);
    const auto oracle = brute_force(p);
    if (!oracle) {
      EXPECT_THROW(bmatching_min_cost(p), MatchingInfeasible);
      continue;
    }
    const auto r = bmatching_min_cost(p);
    EXPECT_NEAR(r.weight, *oracle, 1e-9);
    EXPECT_TRUE(r.certified);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}
