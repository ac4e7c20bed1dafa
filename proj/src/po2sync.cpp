#include "ewls/po2sync.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"
#include "ewls/gadget.hpp"
#include "ewls/kernels.hpp"

namespace ewls {

Exponent decompose(double T_hat, double T_min) {
  if (!(T_hat > 0) || !(T_min > 0) || T_hat < T_min) throw DomainError("decompose needs 0 < T_min <= T_hat");
  const double r = std::log2(T_hat / T_min);
  double a = std::floor(r);
  double b = r - a;
  if (b > 1 - 1e-12) {
    a += 1;
    b = 0;
  } else if (b < 1e-12) {
    b = 0;
  }
  return {static_cast<std::int32_t>(a), b};
}

std::size_t RoundedGroup::index_of(int id) const {
  auto it = std::find(members.begin(), members.end(), id);
  if (it == members.end()) throw DomainError("id not in group");
  return static_cast<std::size_t>(it - members.begin());
}

RoundedGroup po2_round_group(const std::vector<int>& members, const std::vector<double>& T_hat, double theta, int q) {
  if (members.empty() || members.size() != T_hat.size()) throw DomainError("rounding needs a nonempty group");
  if (theta < -0.5 || theta > 0.5) throw DomainError("theta must lie in [-1/2, 1/2]");
  RoundedGroup g;
  g.q = q;
  g.members = members;
  g.T_hat = T_hat;
  g.theta = theta;
  g.T_min = *std::min_element(T_hat.begin(), T_hat.end());
  if (!(g.T_min > 0)) throw DomainError("intervals must be positive");
  g.base = std::exp2(theta) * g.T_min;
  const std::size_t n = members.size();
  std::vector<double> beta(n), ones(n, 1.0);
  std::vector<std::int32_t> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.exponents.push_back(decompose(T_hat[i], g.T_min));
    beta[i] = g.exponents[i].beta;
    alpha[i] = g.exponents[i].alpha;
  }
  g.T_rounded.resize(n);
  kernels::active().po2_round(beta.data(), alpha.data(), ones.data(), g.T_rounded.data(), n, theta, g.base);
  g.shift.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.shift[i] = alpha[i] + (theta < beta[i] - 0.5 ? 1 : 0);
  return g;
}

RoundedGroup po2_round_group(const std::map<int, double>& T_hat, double theta, int q) {
  std::vector<int> ids;
  std::vector<double> ts;
  for (const auto& [id, t] : T_hat) {
    ids.push_back(id);
    ts.push_back(t);
  }
  return po2_round_group(ids, ts, theta, q);
}

int default_Q(double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0, 1)");
  return static_cast<int>(std::ceil(20.0 * std::log(1.0 / eps) / (eps * eps)));
}

int min_group_size(double eps) { return static_cast<int>(std::ceil(2.0 / (eps * eps) - 1e-9)); }

std::vector<std::vector<int>> partition_heavy(std::vector<int> heavy_ids, int Q, CounterRng& rng) {
  if (Q < 1) throw ParameterError("Q must be positive");
  if (heavy_ids.size() < static_cast<std::size_t>(Q))
    throw ParameterError("fewer heavy commodities than groups; use a surrogate Q");
  std::shuffle(heavy_ids.begin(), heavy_ids.end(), rng);
  const std::size_t n = heavy_ids.size(), q = static_cast<std::size_t>(Q);
  std::vector<std::vector<int>> groups(q);
  std::size_t pos = 0;
  for (std::size_t g = 0; g < q; ++g) {
    const std::size_t size = n / q + (g < n % q ? 1 : 0);
    groups[g].assign(heavy_ids.begin() + static_cast<long>(pos), heavy_ids.begin() + static_cast<long>(pos + size));
    pos += size;
  }
  return groups;
}

PairingResult pair_near_far(const RoundedGroup& group, const GammaOf& gamma, double eps) {
  const std::size_t n = group.members.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = gamma(group.members[i]) * group.T_rounded[i];
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return group.members[a] < group.members[b];
  });
  PairingResult r;
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    const std::size_t l = order[k], s = order[k + 1];
    const std::pair<int, int> p{group.members[l], group.members[s]};
    if (v[l] >= (1 + eps) * v[s])
      r.far_pairs.push_back(p);
    else
      r.near_pairs.push_back(p);
  }
  if (n % 2 == 1) r.leftover = group.members[order[n - 1]];
  return r;
}

double po2_inflation() { return 1.0 / (std::sqrt(2.0) * std::log(2.0)); }

EventA check_event_A(const std::vector<RoundedGroup>& groups, const GammaOf& gamma, double eps) {
  EventA e;
  double hat = 0;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      const double gi = gamma(g.members[i]);
      e.lhs += gi * g.T_rounded[i];
      hat += gi * g.T_hat[i];
    }
  }
  e.rhs = (1 + eps) * po2_inflation() * hat;
  e.holds = e.lhs <= e.rhs;
  return e;
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::light_majority: return "light_majority";
    case Branch::heavy_event_A: return "heavy_event_A";
    case Branch::heavy_fallback: return "heavy_fallback";
    case Branch::ell_infinity: return "ell_infinity";
  }
  return "?";
}

namespace {

void add_sosi(CyclicPolicy& p, int id, double T) { p.schedules.emplace(id, sosi_schedule(T, 0.0)); }

constexpr double kAlphaNumerator = 7.0 / 8.0;

}  // namespace

ClassPolicyResult build_class_policy(const Instance& instance, const ClassInput& input, const ClassConfig& config) {
  const double eps = config.eps;
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0, 1)");
  if (input.members.empty()) throw DomainError("empty class");
  ClassPolicyResult res;
  const std::size_t n = input.members.size();
  auto gamma = [&](int id) { return instance.by_id(id).gamma; };
  auto that = [&](int id) { return input.T_hat.at(id); };

  for (int id : input.members) {
    const auto& c = instance.by_id(id);
    res.sosi_cost += eoq_cost({c.K, c.H}, that(id));
  }
  res.space_bound = (1 + 6 * eps) * 1.75 * po2_inflation() * static_cast<double>(n) * input.cap;

  std::vector<int> heavy, light;
  for (int id : input.members) {
    (gamma(id) * that(id) / 2 > config.heavy_fraction * input.cap ? heavy : light).push_back(id);
  }
  res.heavy = heavy.size();
  res.light = light.size();

  auto passthrough = [&](double factor) {
    for (int id : input.members) add_sosi(res.policy, id, that(id) * factor);
  };

  if (!input.ell) {
    res.branch = Branch::ell_infinity;
    passthrough(1.0);
  } else if (2 * light.size() >= n) {
    res.branch = Branch::light_majority;
    passthrough(1.0);
  } else {
    int Q = config.Q > 0 ? config.Q : default_Q(eps);
    const auto need = static_cast<std::size_t>(min_group_size(eps));
    if (heavy.size() / static_cast<std::size_t>(Q) < need) {
      const int surrogate = std::min<int>(Q, static_cast<int>(heavy.size() / need));
      if (surrogate >= 1) {
        res.flags.push_back("surrogate_Q:" + std::to_string(Q) + "->" + std::to_string(surrogate));
        Q = surrogate;
      } else {
        Q = 0;
        res.flags.push_back("heavy_branch_refused:too_few_heavy");
      }
    }
    res.Q_used = Q;
    const double alpha = kAlphaNumerator * po2_inflation();
    if (Q == 0) {
      res.branch = Branch::heavy_fallback;
      passthrough(alpha);
    } else {
      const std::uint64_t ell = static_cast<std::uint64_t>(*input.ell);
      CounterRng prng(config.seed, stream_id(config.draw, ell, 0xffffffffULL));
      const auto parts = partition_heavy(heavy, Q, prng);
      std::vector<RoundedGroup> groups;
      groups.reserve(parts.size());
      for (std::size_t q = 0; q < parts.size(); ++q) {
        double theta;
        if (config.forced_theta) {
          theta = config.forced_theta->at(q);
        } else {
          CounterRng r(config.seed, stream_id(config.draw, ell, q + 1));
          theta = r.uniform(-0.5, 0.5);
        }
        std::vector<double> ts;
        for (int id : parts[q]) ts.push_back(that(id));
        groups.push_back(po2_round_group(parts[q], ts, theta, static_cast<int>(q)));
      }
      res.event = check_event_A(groups, gamma, eps);
      if (!res.event.holds) {
        res.branch = Branch::heavy_fallback;
        passthrough(alpha);
      } else {
        res.branch = Branch::heavy_event_A;
        const double far_cap = 11.0 / (10.0 * eps);
        for (const auto& g : groups) {
          const auto pr = pair_near_far(g, gamma, eps);
          res.far_pairs += pr.far_pairs.size();
          if (static_cast<double>(pr.far_pairs.size()) > far_cap) ++res.far_pair_cap_violations;
          std::unordered_map<int, double> by_id;
          for (std::size_t i = 0; i < g.members.size(); ++i) by_id.emplace(g.members[i], g.T_rounded[i]);
          auto rounded = [&](int id) { return by_id.at(id); };
          for (const auto& [x, y] : pr.near_pairs) {
            const double tx = rounded(x), ty = rounded(y);
            int ex = 0, ey = 0;
            std::frexp(tx, &ex);
            std::frexp(ty, &ey);
            if (std::abs(ex - ey) > config.max_gadget_k) {
              res.flags.push_back("near_pair_too_wide:" + std::to_string(x) + "," + std::to_string(y));
              add_sosi(res.policy, x, tx);
              add_sosi(res.policy, y, ty);
              continue;
            }
            const auto gs = build_pair({instance.by_id(x), instance.by_id(y), tx, ty, eps});
            merge_into(res.policy, gs.policy);
            ++res.near_pairs;
          }
          for (const auto& [x, y] : pr.far_pairs) {
            add_sosi(res.policy, x, rounded(x));
            add_sosi(res.policy, y, rounded(y));
          }
          if (pr.leftover) {
            add_sosi(res.policy, *pr.leftover, rounded(*pr.leftover));
            ++res.leftovers;
          }
        }
        for (int id : light) add_sosi(res.policy, id, that(id));
      }
    }
  }

  if (config.evaluate) {
    std::vector<Commodity> cs;
    for (int id : input.members) cs.push_back(instance.by_id(id));
    const Instance sub(instance.capacity(), std::move(cs));
    res.certificate = evaluate_policy(sub, res.policy, config.eval);
    res.space_ratio = res.certificate.peak_space_upper / (static_cast<double>(n) * input.cap);
    res.cost_ratio = res.certificate.total_cost / res.sosi_cost;
    res.space_bound_ok = res.certificate.peak_space_upper <= res.space_bound * (1 + 1e-9);
  }
  return res;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto t = static_cast<std::size_t>(std::max(1, threads));
  if (t == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (std::size_t w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += t) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ewls
