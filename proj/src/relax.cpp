#include "ewls/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ewls/errors.hpp"
#include "ewls/kernels.hpp"

namespace ewls {

namespace {

struct Columns {
  std::vector<double> K, H, g;
  explicit Columns(const std::vector<Commodity>& cs) {
    for (const auto& c : cs) {
      K.push_back(c.K);
      H.push_back(c.H);
      g.push_back(c.gamma);
    }
  }
  double usage(double lambda) const {
    return kernels::active().waterfill_sum(K.data(), H.data(), g.data(), K.size(), lambda);
  }
};

}  // namespace

RelaxSolution solve_relax_exact(const std::vector<Commodity>& commodities, double budget) {
  if (!(budget > 0)) throw DomainError("budget must be positive");
  if (commodities.empty()) throw DomainError("no commodities");
  const Columns cols(commodities);
  double lambda = 0;
  if (cols.usage(0) > budget) {
    double hi = 1;
    while (cols.usage(hi) > budget) hi *= 2;
    double lo = 0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (cols.usage(mid) > budget)
        lo = mid;
      else
        hi = mid;
      if (budget - cols.usage(hi) <= 1e-12 * budget) break;
    }
    lambda = hi;
  }

  RelaxSolution sol;
  sol.budget = budget;
  sol.lambda = lambda;
  double stationarity = 0;
  for (const auto& c : commodities) {
    const double T = std::sqrt(c.K / (c.H + lambda * c.gamma));
    sol.intervals[c.id] = T;
    sol.objective += c.K / T + c.H * T;
    sol.budget_used += c.gamma * T;
    const double grad = -c.K / (T * T) + c.H + lambda * c.gamma;
    stationarity = std::max(stationarity, std::abs(grad) / (c.H + lambda * c.gamma));
  }
  const double slack = lambda * (budget - sol.budget_used) / std::max(sol.objective, 1e-300);
  sol.kkt_residual = std::max(stationarity, std::abs(slack));
  return sol;
}

RelaxSolution solve_relax_exact(const Instance& instance, double budget) {
  return solve_relax_exact(instance.commodities(), budget);
}

RelaxSolution solve_relax_dp(const std::vector<Commodity>& commodities, double budget, double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(budget > 0)) throw DomainError("budget must be positive");
  const std::size_t n = commodities.size();
  if (n == 0) throw DomainError("no commodities");
  const auto units = static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(n) / eps));
  const double unit = budget / static_cast<double>(units);
  const double inf = std::numeric_limits<double>::infinity();

  // best[b]: min cost of the commodities so far using at most b units.
  std::vector<double> best(units + 1, 0.0), next(units + 1);
  std::vector<std::vector<std::uint32_t>> choice(n, std::vector<std::uint32_t>(units + 1, 0));
  std::vector<double> cost;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = commodities[i];
    const EoqParams p{c.K, c.H};
    const double tstar = eoq_opt(p);
    const auto saturate = static_cast<std::size_t>(std::ceil(tstar * c.gamma / unit));
    const std::size_t kmax = std::min(units - (n - 1 - i), std::max<std::size_t>(saturate, 1));
    cost.assign(kmax + 1, inf);
    for (std::size_t k = 1; k <= kmax; ++k) cost[k] = capped_eoq(p, static_cast<double>(k) * unit / c.gamma).cost;
    for (std::size_t b = 0; b <= units; ++b) {
      double v = inf;
      std::uint32_t arg = 0;
      const std::size_t top = std::min(b, kmax);
      for (std::size_t k = 1; k <= top; ++k) {
        const double cand = best[b - k] + cost[k];
        if (cand < v) {
          v = cand;
          arg = static_cast<std::uint32_t>(k);
        }
      }
      next[b] = v;
      choice[i][b] = arg;
    }
    best.swap(next);
  }

  RelaxSolution sol;
  sol.budget = budget;
  std::size_t b = units;
  for (std::size_t i = n; i-- > 0;) {
    const auto& c = commodities[i];
    const std::uint32_t k = choice[i][b];
    if (k == 0) throw DomainError("dynamic program found no allocation");
    const auto ce = capped_eoq({c.K, c.H}, static_cast<double>(k) * unit / c.gamma);
    sol.intervals[c.id] = ce.T;
    sol.objective += ce.cost;
    sol.budget_used += c.gamma * ce.T;
    b -= k;
  }
  return sol;
}

RelaxSolution solve_relax_dp(const Instance& instance, double budget, double eps) {
  return solve_relax_dp(instance.commodities(), budget, eps);
}

ClassicalResult classical_two_approx(const Instance& instance, const EvalOptions& options) {
  ClassicalResult r;
  r.relaxation = solve_relax_exact(instance, 2.0 * instance.capacity());
  for (const auto& [id, T] : r.relaxation.intervals) r.sosi[id] = {T / 2.0, 0.0};
  r.certificate = evaluate_policy(instance, sosi_to_cyclic(r.sosi), options);
  return r;
}

bool is_zio(const CyclicSchedule& s) {
  Rational level = s.i0;
  Rational prev = 0;
  for (const auto& o : s.orders) {
    level -= o.time - prev;
    if (sgn(level) != 0) return false;
    level += o.quantity;
    prev = o.time;
  }
  return true;
}

CyclicSchedule sosify(const CyclicSchedule& s, const EoqParams& p) {
  validate(p);
  validate_schedule(0, s);
  if (!is_zio(s)) throw DomainError("sosify requires a zero-inventory-ordering schedule");
  const long m = static_cast<long>(s.orders.size());
  const Rational spacing = s.cycle / m;
  const Rational start = s.orders.front().time;
  CyclicSchedule out;
  out.cycle = s.cycle;
  for (long k = 0; k < m; ++k) out.orders.push_back({fmod_pos(start + spacing * k, s.cycle), spacing});
  std::sort(out.orders.begin(), out.orders.end(), [](const Order& a, const Order& b) { return a.time < b.time; });
  out.i0 = out.orders.front().time;
  return out;
}

}  // namespace ewls
