#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "ewls/kernels.hpp"
#include "ewls/rng.hpp"

using namespace ewls;
namespace k = ewls::kernels;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

const k::Table* vector_table() {
  if (!k::cpu_has_avx2()) return nullptr;
  return k::avx2_table();
}

struct Step {
  double cycle, i0;
  std::vector<double> times, prefix;
  k::StepView view() const { return {cycle, i0, times.data(), prefix.data(), times.size()}; }
};

Step random_step(CounterRng& rng) {
  Step s;
  s.cycle = rng.uniform(0.5, 4);
  const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform(0, 9));
  for (std::size_t j = 0; j < m; ++j) s.times.push_back(s.cycle * static_cast<double>(j) / static_cast<double>(m));
  s.prefix.push_back(0);
  for (std::size_t j = 0; j < m; ++j) s.prefix.push_back(s.prefix.back() + s.cycle / static_cast<double>(m));
  s.i0 = s.times.front();
  return s;
}

double naive_level(const Step& s, double t) {
  const double u = t - s.cycle * std::floor(t / s.cycle);
  double v = s.i0 - u;
  for (std::size_t j = 0; j < s.times.size(); ++j)
    if (s.times[j] <= u) v += s.prefix[j + 1] - s.prefix[j];
  return v;
}

}  // namespace

TEST(Kernels, ScalarMatchesNaiveOracle) {
  CounterRng rng(53);
  const auto& sc = k::scalar_table();
  for (int t = 0; t < 50; ++t) {
    const auto s = random_step(rng);
    std::vector<double> probes(37), out(37, 0.0);
    for (auto& p : probes) p = rng.uniform(0, 20);
    sc.accumulate_space(probes.data(), out.data(), probes.size(), s.view(), 2.0);
    for (std::size_t i = 0; i < probes.size(); ++i) EXPECT_NEAR(out[i], 2 * naive_level(s, probes[i]), 1e-12);
  }
  const double K[] = {1, 4, 2}, H[] = {1, 1, 8}, T[] = {1, 2, 0.5};
  EXPECT_DOUBLE_EQ(sc.eoq_cost_sum(K, H, T, 3), 2 + 4 + 8);
  const double g[] = {1, 1, 1};
  EXPECT_DOUBLE_EQ(sc.waterfill_sum(K, H, g, 3, 0), 1 + 2 + 0.5);
}

TEST(Kernels, Avx2BitwiseEqualsScalar) {
  const auto* vt = vector_table();
  if (!vt) GTEST_SKIP() << "AVX2 not available";
  const auto& sc = k::scalar_table();
  CounterRng rng(59);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(0, 67));
    std::vector<double> K(n), H(n), g(n), T(n), beta(n), o1(n), o2(n);
    std::vector<std::int32_t> alpha(n);
    for (std::size_t i = 0; i < n; ++i) {
      K[i] = rng.uniform(0.1, 10), H[i] = rng.uniform(0.1, 10), g[i] = rng.uniform(0.1, 3), T[i] = rng.uniform(0.01, 5);
      beta[i] = rng.uniform(0, 1), alpha[i] = static_cast<std::int32_t>(rng.uniform(0, 12));
    }
    const double lam = rng.uniform(0, 5), theta = rng.uniform(-0.5, 0.5), base = rng.uniform(0.1, 2);
    EXPECT_TRUE(same_bits(sc.waterfill_sum(K.data(), H.data(), g.data(), n, lam), vt->waterfill_sum(K.data(), H.data(), g.data(), n, lam)));
    EXPECT_TRUE(same_bits(sc.eoq_cost_sum(K.data(), H.data(), T.data(), n), vt->eoq_cost_sum(K.data(), H.data(), T.data(), n)));
    const double s1 = sc.po2_round(beta.data(), alpha.data(), g.data(), o1.data(), n, theta, base);
    const double s2 = vt->po2_round(beta.data(), alpha.data(), g.data(), o2.data(), n, theta, base);
    EXPECT_TRUE(same_bits(s1, s2));
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(o1[i], o2[i]));

    const auto s = random_step(rng);
    std::vector<double> probes(n), a(n, 0.5), b(n, 0.5);
    for (auto& p : probes) p = rng.uniform(-5, 50);
    sc.accumulate_space(probes.data(), a.data(), n, s.view(), 1.5);
    vt->accumulate_space(probes.data(), b.data(), n, s.view(), 1.5);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(a[i], b[i])) << a[i] << " vs " << b[i];
  }
}

TEST(Kernels, ActiveHonorsEnvironment) {
  const char* force = std::getenv("EWLS_FORCE_SCALAR");
  if (force && *force && std::strcmp(force, "0") != 0)
    EXPECT_STREQ(k::active().name, k::scalar_table().name);
  else if (vector_table())
    EXPECT_STREQ(k::active().name, vector_table()->name);
  else
    EXPECT_STREQ(k::active().name, k::scalar_table().name);
}
