#include "ewls/bmatching.hpp"

#include <cmath>
#include <string>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

struct Cost {
  long unmet = 0;
  double w = 0;
  Cost operator+(const Cost& o) const { return {unmet + o.unmet, w + o.w}; }
  bool operator<(const Cost& o) const { return unmet != o.unmet ? unmet < o.unmet : w < o.w; }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pred {
  int from = -2;  // -1: source, -2: unreached
  int item = -1;  // left vertex moved or inserted
};

}  // namespace

MatchingResult bmatching_min_cost(const MatchingProblem& p) {
  const std::size_t n = p.left.size(), k = p.right.size();
  if (p.weights.size() != n || p.bounds.size() != k) throw DomainError("matching problem dimensions disagree");
  long lo_sum = 0, hi_sum = 0;
  for (const auto& [lo, hi] : p.bounds) {
    if (lo < 0 || hi < lo) throw MatchingInfeasible("degree bounds must satisfy 0 <= lower <= upper");
    lo_sum += lo;
    hi_sum += hi;
  }
  if (lo_sum > static_cast<long>(n) || hi_sum < static_cast<long>(n))
    throw MatchingInfeasible("degree bounds cannot be met: sum lower " + std::to_string(lo_sum) + ", sum upper " +
                             std::to_string(hi_sum) + ", left size " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (p.weights[i].size() != k) throw DomainError("weight row has wrong length");
    bool any = false;
    for (double w : p.weights[i]) any = any || std::isfinite(w);
    if (!any) throw MatchingInfeasible("left vertex " + std::to_string(p.left[i]) + " has no edges");
  }

  std::vector<int> assign(n, -1);
  std::vector<long> deg(k, 0);
  std::vector<double> entry(k);
  std::vector<int> entry_arg(k);
  std::vector<std::vector<double>> move(k, std::vector<double>(k));
  std::vector<std::vector<int>> move_arg(k, std::vector<int>(k));
  std::vector<Cost> dist(k);
  std::vector<Pred> pred(k);

  for (std::size_t step = 0; step < n; ++step) {
    std::fill(entry.begin(), entry.end(), kInf);
    std::fill(entry_arg.begin(), entry_arg.end(), -1);
    for (auto& row : move) std::fill(row.begin(), row.end(), kInf);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& w = p.weights[i];
      if (assign[i] < 0) {
        for (std::size_t r = 0; r < k; ++r) {
          if (w[r] < entry[r]) {
            entry[r] = w[r];
            entry_arg[r] = static_cast<int>(i);
          }
        }
      } else {
        const auto from = static_cast<std::size_t>(assign[i]);
        for (std::size_t r = 0; r < k; ++r) {
          if (r == from || !std::isfinite(w[r])) continue;
          const double d = w[r] - w[from];
          if (d < move[from][r]) {
            move[from][r] = d;
            move_arg[from][r] = static_cast<int>(i);
          }
        }
      }
    }

    for (std::size_t r = 0; r < k; ++r) {
      pred[r] = {};
      if (std::isfinite(entry[r])) {
        dist[r] = {0, entry[r]};
        pred[r] = {-1, entry_arg[r]};
      }
    }
    for (std::size_t round = 0; round + 1 < k; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < k; ++a) {
        if (pred[a].from == -2) continue;
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b || !std::isfinite(move[a][b])) continue;
          const Cost c = dist[a] + Cost{0, move[a][b]};
          if (pred[b].from == -2 || c < dist[b]) {
            dist[b] = c;
            pred[b] = {static_cast<int>(a), move_arg[a][b]};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    int best = -1;
    Cost best_cost;
    for (std::size_t r = 0; r < k; ++r) {
      if (pred[r].from == -2 || deg[r] >= p.bounds[r].second) continue;
      const Cost c = dist[r] + Cost{deg[r] < p.bounds[r].first ? -1L : 0L, 0.0};
      if (best < 0 || c < best_cost) {
        best = static_cast<int>(r);
        best_cost = c;
      }
    }
    if (best < 0) throw MatchingInfeasible("no augmenting path");

    // Walk back to the source; at most k hops on a shortest-path tree.
    std::vector<std::pair<int, int>> changes;  // (left vertex, new right vertex)
    int at = best;
    for (std::size_t hops = 0; at >= 0 && hops <= k; ++hops) {
      changes.emplace_back(pred[static_cast<std::size_t>(at)].item, at);
      at = pred[static_cast<std::size_t>(at)].from;
    }
    if (at != -1) throw MatchingInfeasible("augmenting path reconstruction failed");
    for (const auto& [item, to] : changes) {
      const auto i = static_cast<std::size_t>(item);
      if (assign[i] >= 0) --deg[static_cast<std::size_t>(assign[i])];
      assign[i] = to;
      ++deg[static_cast<std::size_t>(to)];
    }
  }

  for (std::size_t r = 0; r < k; ++r) {
    if (deg[r] < p.bounds[r].first) throw MatchingInfeasible("lower degree bound of right vertex " + std::to_string(p.right[r]) + " unmet");
  }

  MatchingResult res;
  res.assignment = assign;
  double scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = p.weights[i][static_cast<std::size_t>(assign[i])];
    res.weight += w;
    scale = std::max(scale, std::abs(w));
  }

  // Residual graph on right vertices plus the sink (index k); a negative cycle would mean a cheaper assignment.
  for (auto& row : move) std::fill(row.begin(), row.end(), kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const auto from = static_cast<std::size_t>(assign[i]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r != from && std::isfinite(p.weights[i][r])) move[from][r] = std::min(move[from][r], p.weights[i][r] - p.weights[i][from]);
    }
  }
  std::vector<double> d(k + 1, 0.0);
  auto edge = [&](std::size_t a, std::size_t b) -> double {
    if (a < k && b < k) return move[a][b];
    if (a < k && b == k) return deg[a] < p.bounds[a].second ? 0.0 : kInf;
    if (a == k && b < k) return deg[b] > p.bounds[b].first ? 0.0 : kInf;
    return kInf;
  };
  const double tol = 1e-9 * scale;
  bool negative = false;
  for (std::size_t round = 0; round <= k + 1; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a <= k; ++a) {
      for (std::size_t b = 0; b <= k; ++b) {
        if (a == b) continue;
        const double e = edge(a, b);
        if (std::isfinite(e) && d[a] + e < d[b] - tol) {
          d[b] = d[a] + e;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (round == k + 1) negative = true;
  }
  res.certified = !negative;
  return res;
}

}  // namespace ewls
