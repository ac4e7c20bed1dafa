#include "ewls/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ewls/errors.hpp"
#include "ewls/kernels.hpp"

namespace ewls {

Instance::Instance(double capacity, std::vector<Commodity> commodities)
    : capacity_(capacity), commodities_(std::move(commodities)) {
  if (!(capacity_ > 0) || !std::isfinite(capacity_)) throw DomainError("capacity must be positive");
  if (commodities_.empty()) throw DomainError("instance needs at least one commodity");
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    const auto& c = commodities_[i];
    if (!(c.K > 0) || !(c.H > 0) || !(c.gamma > 0) || !std::isfinite(c.K) || !std::isfinite(c.H) ||
        !std::isfinite(c.gamma))
      throw DomainError("commodity " + std::to_string(c.id) + ": K, H, gamma must be positive");
    if (!index_.emplace(c.id, i).second) throw DomainError("duplicate commodity id " + std::to_string(c.id));
  }
}

const Commodity& Instance::by_id(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DomainError("unknown commodity id " + std::to_string(id));
  return commodities_[it->second];
}

void validate_schedule(int id, const CyclicSchedule& s) {
  if (sgn(s.cycle) <= 0) throw ScheduleInfeasible(id, "0", "cycle length must be positive");
  if (s.orders.empty()) throw ScheduleInfeasible(id, "0", "schedule has no orders");
  if (sgn(s.i0) < 0) throw ScheduleInfeasible(id, "0", "negative initial inventory");
  Rational total = 0;
  Rational level = s.i0;
  Rational prev = 0;
  for (std::size_t j = 0; j < s.orders.size(); ++j) {
    const auto& o = s.orders[j];
    if (sgn(o.time) < 0 || o.time >= s.cycle) throw ScheduleInfeasible(id, to_string(o.time), "order time outside [0, cycle)");
    if (j > 0 && o.time <= s.orders[j - 1].time) throw ScheduleInfeasible(id, to_string(o.time), "order times not strictly increasing");
    if (sgn(o.quantity) <= 0) throw ScheduleInfeasible(id, to_string(o.time), "nonpositive order quantity");
    level -= o.time - prev;
    if (sgn(level) < 0) throw ScheduleInfeasible(id, to_string(o.time), "inventory negative before order");
    level += o.quantity;
    total += o.quantity;
    prev = o.time;
  }
  if (total != s.cycle) throw ScheduleInfeasible(id, to_string(s.cycle), "mass balance violated: quantities sum to " + to_string(total));
  level -= s.cycle - prev;
  if (sgn(level) < 0) throw ScheduleInfeasible(id, to_string(s.cycle), "inventory negative at cycle end");
  if (level != s.i0) throw ScheduleInfeasible(id, to_string(s.cycle), "periodicity violated: I(cycle-) != I0");
}

void validate_policy(const Instance& instance, const CyclicPolicy& policy) {
  for (const auto& c : instance.commodities()) {
    auto it = policy.schedules.find(c.id);
    if (it == policy.schedules.end()) throw ScheduleInfeasible(c.id, "0", "no schedule for commodity");
    validate_schedule(c.id, it->second);
  }
  for (const auto& [id, s] : policy.schedules) {
    if (!instance.contains(id)) throw ScheduleInfeasible(id, "0", "schedule for unknown commodity");
  }
}

Rational inventory_integral(const CyclicSchedule& s) {
  Rational area = 0;
  Rational level = s.i0;
  Rational prev = 0;
  auto segment = [&](const Rational& until) {
    const Rational d = until - prev;
    area += level * d - d * d / 2;
    level -= d;
    prev = until;
  };
  for (const auto& o : s.orders) {
    segment(o.time);
    level += o.quantity;
  }
  segment(s.cycle);
  return area;
}

Rational inventory_at(const CyclicSchedule& s, const Rational& t) {
  const Rational u = fmod_pos(t, s.cycle);
  Rational level = s.i0 - u;
  for (const auto& o : s.orders) {
    if (o.time > u) break;
    level += o.quantity;
  }
  return level;
}

Rational peak_inventory(const CyclicSchedule& s) {
  Rational best = s.i0;
  Rational level = s.i0;
  Rational prev = 0;
  for (const auto& o : s.orders) {
    level -= o.time - prev;
    level += o.quantity;
    prev = o.time;
    if (level > best) best = level;
  }
  return best;
}

CommodityStats schedule_stats(const Commodity& c, const CyclicSchedule& s) {
  const Rational avg = inventory_integral(s) / s.cycle;
  const Rational rate = Rational(static_cast<long>(s.orders.size())) / s.cycle;
  CommodityStats st;
  st.avg_inventory = to_double(avg);
  st.order_rate = to_double(rate);
  st.long_run_cost = c.K * st.order_rate + 2.0 * c.H * st.avg_inventory;
  st.peak_inventory = to_double(peak_inventory(s));
  return st;
}

namespace {

std::optional<Rational> hyperperiod_of(const std::vector<const CyclicSchedule*>& ss, std::uint64_t budget) {
  if (ss.empty()) return std::nullopt;
  Rational h = ss.front()->cycle;
  Rational min_cycle = h;
  const Rational cap(mpz_class(std::to_string(budget)));
  for (const auto* s : ss) {
    h = rational_lcm(h, s->cycle);
    if (s->cycle < min_cycle) min_cycle = s->cycle;
    if (h / min_cycle > cap) return std::nullopt;
  }
  BigInt events = 0;
  for (const auto* s : ss) {
    const Rational reps = h / s->cycle;
    events += reps.get_num() * static_cast<unsigned long>(s->orders.size());
    if (events > BigInt(std::to_string(budget))) return std::nullopt;
  }
  return h;
}

}  // namespace

std::optional<Rational> hyperperiod(const CyclicPolicy& policy, std::uint64_t event_budget) {
  std::vector<const CyclicSchedule*> ss;
  for (const auto& [id, s] : policy.schedules) ss.push_back(&s);
  return hyperperiod_of(ss, event_budget);
}

std::optional<Rational> hyperperiod(const CyclicPolicy& policy, const std::vector<int>& ids, std::uint64_t event_budget) {
  std::vector<const CyclicSchedule*> ss;
  for (int id : ids) ss.push_back(&policy.schedules.at(id));
  return hyperperiod_of(ss, event_budget);
}

std::optional<PeakResult> exact_peak(const Instance& instance, const CyclicPolicy& policy, const std::vector<int>& ids,
                                     std::uint64_t event_budget) {
  std::vector<const CyclicSchedule*> ss;
  for (int id : ids) ss.push_back(&policy.schedules.at(id));
  const auto h = hyperperiod_of(ss, event_budget);
  if (!h) return std::nullopt;

  struct Event {
    Rational time;
    Rational delta;
  };
  std::vector<Event> events;
  Rational rate = 0;
  Rational v = 0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto& s = *ss[k];
    const Rational g = from_double(instance.by_id(ids[k]).gamma);
    rate += g;
    v += g * s.i0;
    const long reps = Rational(*h / s.cycle).get_num().get_si();
    for (long r = 0; r < reps; ++r) {
      const Rational shift = s.cycle * r;
      for (const auto& o : s.orders) events.push_back({shift + o.time, g * o.quantity});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });

  PeakResult res;
  res.events = events.size();
  res.peak = v;  // value at 0 when nothing is ordered there
  res.epoch = 0;
  Rational prev = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const Rational t = events[i].time;
    v -= rate * (t - prev);
    while (i < events.size() && events[i].time == t) v += events[i++].delta;
    prev = t;
    if (v > res.peak) {
      res.peak = v;
      res.epoch = t;
    }
  }
  return res;
}

std::vector<std::vector<int>> resolve_components(const CyclicPolicy& policy) {
  std::vector<std::vector<int>> out;
  std::set<int> seen;
  for (const auto& comp : policy.components) {
    std::vector<int> keep;
    for (int id : comp) {
      if (policy.schedules.count(id) && seen.insert(id).second) keep.push_back(id);
    }
    if (!keep.empty()) out.push_back(std::move(keep));
  }
  std::map<Rational, std::vector<int>> by_cycle;
  for (const auto& [id, s] : policy.schedules) {
    if (!seen.count(id)) by_cycle[s.cycle].push_back(id);
  }
  for (auto& [cyc, ids] : by_cycle) out.push_back(std::move(ids));
  return out;
}

namespace {

struct DoubleSchedule {
  double cycle;
  double i0;
  std::vector<double> times;
  std::vector<double> prefix;
};

DoubleSchedule to_doubles(const CyclicSchedule& s) {
  DoubleSchedule d;
  d.cycle = to_double(s.cycle);
  d.i0 = to_double(s.i0);
  d.prefix.push_back(0.0);
  Rational acc = 0;
  for (const auto& o : s.orders) {
    d.times.push_back(to_double(o.time));
    acc += o.quantity;
    d.prefix.push_back(to_double(acc));
  }
  return d;
}

}  // namespace

std::vector<double> sample_space(const Instance& instance, const CyclicPolicy& policy, const std::vector<double>& probes) {
  const auto& kt = kernels::active();
  std::vector<double> out(probes.size(), 0.0);
  for (const auto& [id, s] : policy.schedules) {
    const DoubleSchedule d = to_doubles(s);
    const kernels::StepView view{d.cycle, d.i0, d.times.data(), d.prefix.data(), d.times.size()};
    kt.accumulate_space(probes.data(), out.data(), probes.size(), view, instance.by_id(id).gamma);
  }
  return out;
}

PolicyCertificate evaluate_policy(const Instance& instance, const CyclicPolicy& policy, const EvalOptions& options) {
  validate_policy(instance, policy);
  PolicyCertificate cert;
  for (const auto& c : instance.commodities()) {
    const auto st = schedule_stats(c, policy.schedules.at(c.id));
    cert.per_commodity[c.id] = st;
    cert.total_cost += st.long_run_cost;
    cert.avg_space += c.gamma * st.avg_inventory;
  }

  const auto comps = resolve_components(policy);
  cert.component_count = comps.size();
  for (const auto& comp : comps) {
    const auto p = exact_peak(instance, policy, comp, options.event_budget);
    if (p) {
      cert.peak_space_upper += to_double(p->peak);
    } else {
      for (int id : comp) cert.peak_space_upper += instance.by_id(id).gamma * cert.per_commodity[id].peak_inventory;
    }
  }

  std::optional<Rational> horizon;
  if (options.whole_policy_exact) {
    std::vector<int> all;
    for (const auto& [id, s] : policy.schedules) all.push_back(id);
    const auto p = exact_peak(instance, policy, all, options.event_budget);
    if (p) {
      cert.peak_space_exact_q = p->peak;
      cert.peak_space_exact = to_double(p->peak);
      cert.peak_epoch = p->epoch;
      horizon = hyperperiod(policy, options.event_budget);
    }
  }

  double span = 0;
  if (horizon) {
    span = to_double(*horizon);
  } else {
    for (const auto& [id, s] : policy.schedules) span = std::max(span, to_double(s.cycle));
  }
  const std::size_t n = std::max<std::size_t>(options.sample_grid, 1);
  std::vector<double> probes(n);
  for (std::size_t k = 0; k < n; ++k) probes[k] = span * static_cast<double>(k) / static_cast<double>(n);
  const auto vals = sample_space(instance, policy, probes);
  cert.peak_space_sampled_lower = *std::max_element(vals.begin(), vals.end());
  return cert;
}

CapacityReport check_capacity_feasible(const Instance& instance, const PolicyCertificate& cert, double tol) {
  CapacityReport r;
  r.capacity = instance.capacity();
  if (cert.peak_space_exact_q) {
    r.exact = true;
    r.peak = *cert.peak_space_exact;
    const Rational limit = from_double(instance.capacity()) * (1 + from_double(tol));
    r.feasible = *cert.peak_space_exact_q <= limit;
    r.witness = cert.peak_epoch;
  } else {
    r.peak = cert.peak_space_upper;
    r.feasible = r.peak <= instance.capacity() * (1 + tol);
  }
  return r;
}

CapacityReport check_capacity_feasible(const Instance& instance, const CyclicPolicy& policy, double tol,
                                       const EvalOptions& options) {
  return check_capacity_feasible(instance, evaluate_policy(instance, policy, options), tol);
}

CyclicSchedule sosi_schedule(double T, double phase) {
  if (!(T > 0)) throw DomainError("SOSI interval must be positive");
  if (phase < 0 || phase >= T) throw DomainError("SOSI phase must lie in [0, T)");
  CyclicSchedule s;
  s.cycle = from_double(T);
  const Rational phi = from_double(phase);
  s.orders.push_back({phi, s.cycle});
  s.i0 = phi;
  return s;
}

CyclicPolicy sosi_to_cyclic(const SosiVector& sosi) {
  CyclicPolicy p;
  for (const auto& [id, e] : sosi) p.schedules.emplace(id, sosi_schedule(e.T, e.phase));
  return p;
}

CyclicSchedule scale_schedule(const CyclicSchedule& s, const Rational& factor) {
  CyclicSchedule out;
  out.cycle = s.cycle * factor;
  out.i0 = s.i0 * factor;
  out.orders.reserve(s.orders.size());
  for (const auto& o : s.orders) out.orders.push_back({o.time * factor, o.quantity * factor});
  return out;
}

CyclicPolicy scale_policy(const CyclicPolicy& policy, const Rational& factor) {
  if (sgn(factor) <= 0) throw DomainError("scale factor must be positive");
  CyclicPolicy out;
  out.components = policy.components;
  for (const auto& [id, s] : policy.schedules) out.schedules.emplace(id, scale_schedule(s, factor));
  return out;
}

CyclicPolicy scale_policy(const CyclicPolicy& policy, double factor) {
  if (!(factor > 0) || !std::isfinite(factor)) throw DomainError("scale factor must be positive");
  return scale_policy(policy, from_double(factor));
}

void merge_into(CyclicPolicy& into, const CyclicPolicy& part) {
  for (const auto& [id, s] : part.schedules) {
    if (!into.schedules.emplace(id, s).second) throw DomainError("policies overlap on commodity " + std::to_string(id));
  }
  into.components.insert(into.components.end(), part.components.begin(), part.components.end());
}

}  // namespace ewls
