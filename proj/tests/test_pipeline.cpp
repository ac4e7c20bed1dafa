#include <gtest/gtest.h>

#include <cmath>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"
#include "ewls/generators.hpp"
#include "ewls/pipeline.hpp"

using namespace ewls;

namespace {

PolicyCertificate bench_cert(const Instance& inst, const CyclicPolicy& p) { return evaluate_policy(inst, p); }

Tuning all_dense(double eps = 0.3) {
  Tuning t;
  t.eps = eps;
  t.sparse_threshold = 1e-9;
  return t;
}

}  // namespace

TEST(Classify, SingleCommodityAtCapacityIsClassOne) {
  const Instance inst(1, {{0, 1, 1, 1}});
  const auto cls = classify_volumes(inst, bench_cert(inst, sosi_to_cyclic({{0, {2, 0}}})), Tuning::desk(0.3));
  EXPECT_EQ(cls.class_of.at(0), 1);
  EXPECT_TRUE(cls.sparse.count(1));
  EXPECT_EQ(cls.prefix, std::vector<int>{1});
}

TEST(Classify, TinyVolumeGoesToInfinity) {
  const Instance inst(1, {{0, 1, 1, 1}, {1, 1, 1, 1}});
  // gamma Ibar = 0.1 V <= (eps/n) V = 0.15 V
  const auto cls = classify_volumes(inst, bench_cert(inst, sosi_to_cyclic({{0, {0.2, 0}}, {1, {1, 0}}})), Tuning::desk(0.3));
  EXPECT_EQ(cls.class_of.at(0), kEllInfinity);
  EXPECT_NE(cls.class_of.at(1), kEllInfinity);
}

TEST(Classify, ClassCountAndSpan) {
  EXPECT_EQ(class_count_L(100, 0.25), 27);
  EXPECT_EQ(prefix_span_Delta(0.3), static_cast<int>(std::ceil(std::log(125 / std::pow(0.3, 7)) / std::log(1.3))));
  EXPECT_NEAR(paper_sparse_threshold(0.3), 100 * std::log(1 / 0.3) / std::pow(0.3, 4), 1e-9);
  EXPECT_EQ(Tuning::desk(0.3).threshold(), 268.0 * 23);
}

TEST(Classify, BandsPartitionAndOverestimates) {
  CounterRng rng(61);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(40, rng, rng.uniform(0.2, 0.8));
    const auto bench = classical_two_approx(inst);
    const auto tuning = t % 2 ? all_dense() : Tuning::desk(0.3);
    const auto cls = classify_volumes(inst, bench.certificate, tuning);
    std::size_t counted = 0;
    for (const auto& [ell, ids] : cls.members) counted += ids.size();
    EXPECT_EQ(counted, inst.size());
    const Rational base = from_double(1 + cls.eps);
    for (const auto& [id, ell] : cls.class_of) {
      const auto& s = sosi_schedule(bench.sosi.at(id).T, 0);
      const Rational x = from_double(inst.by_id(id).gamma) * inventory_integral(s) / s.cycle / from_double(inst.capacity());
      Rational lo = 1;
      for (int j = 0; j < (ell == kEllInfinity ? cls.L : ell); ++j) lo /= base;
      if (ell == kEllInfinity) {
        EXPECT_LE(x, lo);
      } else {
        EXPECT_GT(x, lo);
        EXPECT_LE(x, lo * base);
      }
    }
    for (int ell : cls.dense) {
      EXPECT_GE(cls.overestimate.at(ell), cls.class_volume.at(ell));
      EXPECT_LE(cls.overestimate.at(ell),
                cls.class_volume.at(ell) + cls.eps * cls.capacity / static_cast<double>(cls.dense.size()) * (1 + 1e-9));
      EXPECT_GE(cls.N_tilde.at(ell) + 1e-9, static_cast<double>(cls.members.at(ell).size()));
    }
    EXPECT_NEAR(cls.V_S + cls.V_D, bench.certificate.avg_space, 1e-9 * bench.certificate.avg_space);
  }
}

TEST(Mimic, SingleDenseClassForced) {
  std::vector<Commodity> cs;
  SosiVector sv;
  for (int i = 0; i < 5; ++i) {
    cs.push_back({i, 1.0 + i, 1, 1});
    sv[i] = {0.2, 0};
  }
  const Instance inst(1, cs);
  const auto cls = classify_volumes(inst, bench_cert(inst, sosi_to_cyclic(sv)), all_dense());
  ASSERT_EQ(cls.members.size(), 1u);
  const int ell = cls.members.begin()->first;
  const auto m = mimicking_partition(inst, cls, all_dense());
  EXPECT_EQ(m.partition.at(ell).size(), 5u);
  for (const auto& c : cs)
    EXPECT_DOUBLE_EQ(m.T_hat.at(c.id), capped_eoq({c.K, c.H}, interval_cap(cls, ell, c.gamma)).T);
  EXPECT_TRUE(m.lemma6_ok);
}

TEST(Mimic, MatchesBruteForceOnSixCommodities) {
  CounterRng rng(67);
  for (int t = 0; t < 20; ++t) {
    std::vector<Commodity> cs;
    SosiVector sv;
    for (int i = 0; i < 6; ++i) {
      cs.push_back({i, rng.uniform(1, 10), rng.uniform(0.5, 2), 1});
      sv[i] = {i < 3 ? 0.3 : 0.12, 0};
    }
    const Instance inst(1, cs);
    const auto cls = classify_volumes(inst, bench_cert(inst, sosi_to_cyclic(sv)), all_dense());
    ASSERT_EQ(cls.members.size(), 2u);
    const auto m = mimicking_partition(inst, cls, all_dense());
    std::vector<int> classes;
    for (const auto& [ell, ids] : cls.members) classes.push_back(ell);
    double best = INFINITY;
    for (int code = 0; code < 64; ++code) {
      long deg[2] = {0, 0};
      double w = 0;
      for (int i = 0; i < 6; ++i) {
        const int r = (code >> i) & 1;
        ++deg[r];
        w += capped_eoq({cs[i].K, cs[i].H}, interval_cap(cls, classes[r], 1)).cost;
      }
      bool ok = true;
      for (int r = 0; r < 2; ++r) ok = ok && deg[r] >= m.problem.bounds[r].first && deg[r] <= m.problem.bounds[r].second;
      if (ok) best = std::min(best, w);
    }
    EXPECT_NEAR(m.matched_weight, best, 1e-9 * best);
    EXPECT_LE(m.matched_weight, m.identity_weight * (1 + 1e-12));
    EXPECT_LE(m.identity_weight, m.benchmark_cost * (1 + 1e-9));
  }
}

TEST(SuffixDense, LightClassesArePureSosi) {
  CounterRng rng(71);
  const auto inst = random_instance(30, rng, 0.5);
  const auto bench = classical_two_approx(inst);
  auto cls = classify_volumes(inst, bench.certificate, Tuning::desk(0.3));
  std::map<int, ClassType> types;
  for (const auto& [ell, ids] : cls.members) types[ell] = ClassType::suffix;
  apply_types(cls, types);
  const auto m = mimicking_partition(inst, cls, Tuning::desk(0.3));
  const auto sd = build_suffix_dense_policy(inst, cls, m, Tuning::desk(0.3), 1);
  double sosi = 0;
  for (const auto& [id, T] : m.T_hat) sosi += eoq_cost({inst.by_id(id).K, inst.by_id(id).H}, T);
  EXPECT_NEAR(sd.certificate.total_cost, sosi, 1e-9 * sosi);
  for (const auto& s : sd.classes) EXPECT_EQ(s.kind, "suffix");
}

TEST(SuffixDense, InfinityClassesStayWithinTwoEpsV) {
  std::vector<Commodity> cs;
  SosiVector sv;
  for (int i = 0; i < 8; ++i) {
    cs.push_back({i, 0.01, 1, 1});
    sv[i] = {0.02, 0};
  }
  const Instance inst(1, cs);
  const auto t = all_dense();
  const auto cls = classify_volumes(inst, bench_cert(inst, sosi_to_cyclic(sv)), t);
  ASSERT_EQ(cls.members.begin()->first, kEllInfinity);
  const auto m = mimicking_partition(inst, cls, t);
  const auto sd = build_suffix_dense_policy(inst, cls, m, t, 1);
  EXPECT_LE(sd.certificate.peak_space_upper, 2 * t.eps * inst.capacity() * (1 + 1e-12));
}

TEST(Sub2, SingleCommodity) {
  const Instance inst(0.5, {{0, 4, 1, 1}});
  const auto r = run_sub2(inst, {});
  EXPECT_TRUE(r.scenario == Scenario::easy_sparse || r.scenario == Scenario::difficult_lowD);
  EXPECT_TRUE(r.capacity.feasible);
  EXPECT_LE(r.ratio_vs_lower_bound, 2 + 1e-9);
}

TEST(Sub2, OracleBenchmarkEasyScenario) {
  const Instance inst(1.5, {{0, 1, 1, 1}, {1, 1, 1, 1}});
  Sub2Options opt;
  opt.benchmark = sosi_to_cyclic({{0, {1, 0}}, {1, {1, 0.5}}});
  for (auto solver : {PrefixSolver::relax_halve, PrefixSolver::small_search}) {
    opt.prefix_solver = solver;
    const auto r = run_sub2(inst, opt);
    EXPECT_EQ(r.benchmark_source, "oracle_file");
    EXPECT_EQ(r.scenario, Scenario::easy_sparse);
    EXPECT_NEAR(r.classification.V_S, 1.0, 1e-12);
    EXPECT_TRUE(r.capacity.feasible);
    EXPECT_GE(r.final_certificate.total_cost, r.lower_bound * (1 - 1e-9));
  }
}

TEST(Sub2, DenseHeavyRunsScenarioC) {
  const auto inst = generate_instance(Profile::dense_heavy, 6500, 3);
  Sub2Options opt;
  opt.tuning = Tuning::desk(0.3);
  const auto r = run_sub2(inst, opt);
  EXPECT_EQ(r.scenario, Scenario::difficult_dense);
  EXPECT_TRUE(r.capacity.feasible);
  ASSERT_TRUE(r.mimic);
  EXPECT_TRUE(r.mimic->lemma6_ok);
  ASSERT_FALSE(r.classes.empty());
  EXPECT_EQ(r.classes[0].kind, "heavy_event_A");
  EXPECT_LE(r.ratio_vs_lower_bound, 2.05);
  EXPECT_LE(r.suffix_dense_peak, r.dense_bound);
}

TEST(Sub2, FinalPolicyAlwaysFeasibleAndDeterministic) {
  for (auto prof : {Profile::uniform, Profile::two_scale}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = generate_instance(prof, 10 + 7 * seed, seed);
      Sub2Options opt;
      opt.seed = seed;
      const auto a = run_sub2(inst, opt);
      EXPECT_TRUE(a.capacity.feasible);
      EXPECT_TRUE(check_capacity_feasible(inst, a.final_policy).feasible);
      EXPECT_EQ(a.scenario, choose_scenario(a.classification, opt.tuning.delta));
      const auto b = run_sub2(inst, opt);
      EXPECT_EQ(a.final_certificate.total_cost, b.final_certificate.total_cost);
    }
  }
}

TEST(Sub2, EnumerateModeCoversOracleGuess) {
  CounterRng rng(73);
  const auto inst = random_instance(3, rng, 0.5);
  Sub2Options opt;
  opt.enumerate = true;
  const auto r = run_sub2(inst, opt);
  ASSERT_TRUE(r.enumeration);
  EXPECT_TRUE(r.enumeration->oracle_guess_enumerated);
  EXPECT_LE(r.enumeration->best_cost, r.enumeration->oracle_cost * (1 + 1e-12));
  EXPECT_EQ(r.enumeration->tried, r.enumeration->predicted);
  EXPECT_TRUE(r.capacity.feasible);
}

TEST(Sub2, EnumerateRefusesAboveCap) {
  CounterRng rng(79);
  Sub2Options opt;
  opt.enumerate = true;
  EXPECT_THROW(run_sub2(random_instance(200, rng, 0.5), opt), ParameterError);
}

TEST(SmallSearch, FeasibleAndNoWorseThanHalvedRelaxation) {
  CounterRng rng(83);
  for (int t = 0; t < 5; ++t) {
    const auto inst = random_instance(1 + t % 3, rng, 0.6);
    const auto sv = small_instance_search(inst.commodities(), inst.capacity());
    const auto cert = evaluate_policy(inst, sosi_to_cyclic(sv));
    EXPECT_TRUE(check_capacity_feasible(inst, cert).feasible);
    const auto halved = classical_two_approx(inst);
    EXPECT_LE(cert.total_cost, halved.certificate.total_cost * (1 + 1e-12));
  }
}
