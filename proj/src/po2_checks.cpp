#include <algorithm>
#include <cmath>
#include <numeric>

#include "ewls/errors.hpp"
#include "ewls/kernels.hpp"
#include "ewls/po2sync.hpp"

namespace ewls {

namespace {

struct Moments {
  double mean = 0;
  double se = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double ss = 0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.se = std::sqrt(ss / (n - 1) / n);
  return m;
}

bool same_mantissa(double a, double b) {
  int ea = 0, eb = 0;
  return std::frexp(a, &ea) == std::frexp(b, &eb);
}

}  // namespace

HeavyBand make_heavy_band(std::size_t n, double cap, CounterRng& rng, int first_id) {
  HeavyBand hb;
  for (std::size_t i = 0; i < n; ++i) {
    const int id = first_id + static_cast<int>(i);
    const double T = std::exp2(rng.uniform(-3.0, 3.0));
    const double v = cap * (2.0 - 0.5 * rng.uniform01());  // gamma T in (3/2, 2] cap
    const double H = rng.uniform(0.5, 2.0);
    const double K = H * T * T * rng.uniform(1.0, 4.0);
    hb.commodities.push_back({id, K, H, v / T});
    hb.T_hat[id] = T;
  }
  return hb;
}

CheckReport check_claim3(const CheckConfig& cfg) {
  CheckReport rep;
  rep.name = "claim3";
  const std::size_t n_mean = cfg.trials ? cfg.trials : 100'000;
  const std::size_t n_env = 10 * n_mean;
  const double target = po2_inflation();

  std::vector<double> up(n_mean), down(n_mean);
  parallel_for(n_mean, cfg.threads, [&](std::size_t i) {
    CounterRng r(cfg.seed, stream_id(3, 0, i));
    const double t_min = 1.0;
    const double t_hat = std::exp2(r.uniform01());
    const double theta = r.uniform(-0.5, 0.5);
    const auto g = po2_round_group({0, 1}, {t_min, t_hat}, theta);
    up[i] = g.T_rounded[1] / t_hat;
    down[i] = t_hat / g.T_rounded[1];
  });
  const Moments mu = moments(up), md = moments(down);

  const std::size_t group = 8;
  const std::size_t blocks = n_env / group;
  std::vector<char> env_ok(blocks, 1), po2_ok(blocks, 1);
  parallel_for(blocks, cfg.threads, [&](std::size_t b) {
    CounterRng r(cfg.seed, stream_id(3, 1, b));
    std::vector<int> ids(group);
    std::vector<double> ts(group);
    for (std::size_t k = 0; k < group; ++k) {
      ids[k] = static_cast<int>(k);
      ts[k] = std::exp2(r.uniform(-6.0, 6.0));
    }
    const auto g = po2_round_group(ids, ts, r.uniform(-0.5, 0.5));
    for (std::size_t k = 0; k < group; ++k) {
      const double lo = ts[k] / std::sqrt(2.0), hi = ts[k] * std::sqrt(2.0);
      if (g.T_rounded[k] < lo * (1 - 1e-12) || g.T_rounded[k] > hi * (1 + 1e-12)) env_ok[b] = 0;
      if (!same_mantissa(g.T_rounded[k], g.T_rounded[0]) ||
          g.T_rounded[k] != std::ldexp(g.base, g.shift[k]))
        po2_ok[b] = 0;
    }
  });
  const auto env_fail = static_cast<double>(std::count(env_ok.begin(), env_ok.end(), 0));
  const auto po2_fail = static_cast<double>(std::count(po2_ok.begin(), po2_ok.end(), 0));

  const bool mean_up = std::abs(mu.mean - target) <= 3 * mu.se;
  const bool mean_down = std::abs(md.mean - target) <= 3 * md.se;
  rep.passed = mean_up && mean_down && env_fail == 0 && po2_fail == 0;
  rep.stats = {{"target", target},
               {"mean_T_over_That", mu.mean},
               {"se_T_over_That", mu.se},
               {"mean_That_over_T", md.mean},
               {"se_That_over_T", md.se},
               {"envelope_samples", static_cast<double>(blocks * group)},
               {"envelope_failures", env_fail},
               {"po2_failures", po2_fail}};
  return rep;
}

CheckReport check_claim4(const CheckConfig& cfg) {
  CheckReport rep;
  rep.name = "claim4";
  const std::size_t groups = cfg.trials ? cfg.trials : 1000;
  const double cap = 11.0 / (10.0 * cfg.eps);
  std::vector<std::size_t> far(groups);
  parallel_for(groups, cfg.threads, [&](std::size_t q) {
    CounterRng r(cfg.seed, stream_id(4, static_cast<std::uint64_t>(cfg.eps * 1e6), q));
    const std::size_t m = 2 + r() % 63;
    const auto hb = make_heavy_band(m, 1.0, r);
    const auto g = po2_round_group(hb.T_hat, r.uniform(-0.5, 0.5));
    const auto pr = pair_near_far(g, [&](int id) { return hb.commodities[static_cast<std::size_t>(id)].gamma; }, cfg.eps);
    far[q] = pr.far_pairs.size();
  });
  const auto worst = *std::max_element(far.begin(), far.end());
  rep.passed = static_cast<double>(worst) <= cap;
  rep.stats = {{"eps", cfg.eps}, {"groups", static_cast<double>(groups)}, {"max_far_pairs", static_cast<double>(worst)},
               {"bound", cap}};
  return rep;
}

CheckReport check_lemma10(const CheckConfig& cfg) {
  CheckReport rep;
  rep.name = "lemma10";
  const double eps = cfg.eps;
  const std::size_t trials = cfg.trials ? cfg.trials : 10'000;
  const auto Q = static_cast<std::size_t>(default_Q(eps));
  const auto size = static_cast<std::size_t>(min_group_size(eps));
  CounterRng gen(cfg.seed, stream_id(10, 0, 0));
  const auto hb = make_heavy_band(Q * size, 1.0, gen);

  struct Group {
    std::vector<double> beta, gamma, out;
    std::vector<std::int32_t> alpha;
    double t_min = 0;
  };
  std::vector<Group> groups(Q);
  double hat = 0;
  for (std::size_t q = 0; q < Q; ++q) {
    auto& g = groups[q];
    g.t_min = hb.T_hat.at(static_cast<int>(q * size));
    for (std::size_t k = 0; k < size; ++k) g.t_min = std::min(g.t_min, hb.T_hat.at(static_cast<int>(q * size + k)));
    for (std::size_t k = 0; k < size; ++k) {
      const int id = static_cast<int>(q * size + k);
      const auto e = decompose(hb.T_hat.at(id), g.t_min);
      g.alpha.push_back(e.alpha);
      g.beta.push_back(e.beta);
      g.gamma.push_back(hb.commodities[static_cast<std::size_t>(id)].gamma);
      hat += g.gamma.back() * hb.T_hat.at(id);
    }
  }
  const double rhs = (1 + eps) * po2_inflation() * hat;
  const auto& kt = kernels::active();
  std::vector<char> fail(trials, 0);
  std::vector<double> ratio(trials);
  parallel_for(trials, cfg.threads, [&](std::size_t t) {
    std::vector<double> out(size);
    double lhs = 0;
    for (std::size_t q = 0; q < Q; ++q) {
      CounterRng r(cfg.seed, stream_id(10, t + 1, q));
      const double theta = r.uniform(-0.5, 0.5);
      const auto& g = groups[q];
      lhs += kt.po2_round(g.beta.data(), g.alpha.data(), g.gamma.data(), out.data(), size, theta,
                          std::exp2(theta) * g.t_min);
    }
    fail[t] = lhs > rhs;
    ratio[t] = lhs / hat;
  });
  const double p = static_cast<double>(std::count(fail.begin(), fail.end(), 1)) / static_cast<double>(trials);
  const double bound = eps / 10 + 3 * std::sqrt(p * (1 - p) / static_cast<double>(trials));
  rep.passed = p <= bound;
  rep.stats = {{"eps", eps},
               {"Q", static_cast<double>(Q)},
               {"group_size", static_cast<double>(size)},
               {"heavy", static_cast<double>(Q * size)},
               {"trials", static_cast<double>(trials)},
               {"failure_rate", p},
               {"bound", bound},
               {"max_ratio", *std::max_element(ratio.begin(), ratio.end())},
               {"event_threshold_ratio", rhs / hat}};
  return rep;
}

CheckReport check_lemma12(const CheckConfig& cfg, std::size_t class_size) {
  CheckReport rep;
  rep.name = "lemma12";
  const double eps = cfg.eps;
  const std::size_t draws = cfg.trials ? cfg.trials : 500;
  const std::size_t n = class_size ? class_size
                                   : static_cast<std::size_t>(default_Q(eps)) * static_cast<std::size_t>(min_group_size(eps));
  CounterRng gen(cfg.seed, stream_id(12, 0, 0));
  const double cap = 1.0;
  const auto hb = make_heavy_band(n, cap, gen);
  const Instance inst(1e9, hb.commodities);
  ClassInput in;
  in.ell = 1;
  in.cap = cap;
  for (const auto& c : hb.commodities) in.members.push_back(c.id);
  in.T_hat = hb.T_hat;

  std::vector<double> cost(draws), space(draws);
  std::vector<char> space_ok(draws), event(draws);
  double bound_space = 0;
  parallel_for(draws, cfg.threads, [&](std::size_t d) {
    ClassConfig cc;
    cc.eps = eps;
    cc.seed = cfg.seed;
    cc.draw = d;
    const auto res = build_class_policy(inst, in, cc);
    cost[d] = res.cost_ratio;
    space[d] = res.space_ratio;
    space_ok[d] = res.space_bound_ok;
    event[d] = res.branch == Branch::heavy_event_A;
    if (d == 0) bound_space = res.space_bound / (static_cast<double>(n) * cap);
  });
  const Moments m = moments(cost);
  const double bound = (1 + 2 * eps / 5) * (32.0 / 31.0) * po2_inflation();
  const auto space_fail = static_cast<double>(std::count(space_ok.begin(), space_ok.end(), 0));
  rep.passed = space_fail == 0 && m.mean <= bound + 3 * m.se;
  rep.stats = {{"eps", eps},
               {"class_size", static_cast<double>(n)},
               {"draws", static_cast<double>(draws)},
               {"mean_cost_ratio", m.mean},
               {"se_cost_ratio", m.se},
               {"cost_bound", bound},
               {"max_space_ratio", *std::max_element(space.begin(), space.end())},
               {"space_bound_ratio", bound_space},
               {"space_failures", space_fail},
               {"event_A_rate", static_cast<double>(std::count(event.begin(), event.end(), 1)) / static_cast<double>(draws)}};
  return rep;
}

}  // namespace ewls
