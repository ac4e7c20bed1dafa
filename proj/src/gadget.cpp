#include "ewls/gadget.hpp"

#include <algorithm>
#include <cmath>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"
#include "ewls/gadget_table.hpp"

namespace ewls {

namespace {

Rational frac(gadget_table::Frac f) { return make_rational(f.num, f.den); }

const gadget_table::Case& lookup(int case_id) {
  if (case_id < 1 || case_id > 6) throw DomainError("gadget case must be 1..6");
  return gadget_table::cases[case_id - 1];
}

// Exponent k with T_a = 2^k T_b, or nullopt.
std::optional<int> power_of_two_gap(double T_a, double T_b) {
  if (!(T_a > 0) || !(T_b > 0)) return std::nullopt;
  int ea = 0, eb = 0;
  const double ma = std::frexp(T_a, &ea);
  const double mb = std::frexp(T_b, &eb);
  if (ma != mb) return std::nullopt;
  return ea - eb;
}

}  // namespace

int classify_case(double T_a, double T_b) {
  const auto k = power_of_two_gap(T_a, T_b);
  if (!k) throw DomainError("interval ratio is not an exact power of 2");
  if (*k < 0) throw DomainError("classify_case expects T_b <= T_a");
  return *k >= 5 ? 6 : *k + 1;
}

void validate_couple(const Sub1Couple& c) {
  if (!(c.eps > 0 && c.eps < 1)) throw DomainError("couple epsilon must lie in (0, 1)");
  const double hi = std::max(c.T_a, c.T_b), lo = std::min(c.T_a, c.T_b);
  if (!power_of_two_gap(hi, lo)) throw DomainError("couple intervals are not a power-of-2 apart");
  const double va = c.a.gamma * c.T_a, vb = c.b.gamma * c.T_b;
  if (va > (1 + c.eps) * vb * (1 + 1e-12) || va < (1 - c.eps) * vb * (1 - 1e-12))
    throw DomainError("couple peak volumes differ by more than a factor 1 +- eps");
}

GadgetSchedule build_case(int case_id, const Commodity& a, const Commodity& b, double T_a, int k_case6) {
  const auto& spec = lookup(case_id);
  const int k = spec.k >= 0 ? spec.k : k_case6;
  if (k < 0 || (spec.k < 0 && k < 5)) throw DomainError("case 6 needs T_A / T_B = 2^k with k >= 5");
  if (k > 40) throw DomainError("interval ratio too large for an explicit schedule");
  const Rational ta = from_double(T_a);
  const Rational ratio = Rational(1, 1) / Rational(BigInt(1) << k);  // T_b / T_a

  GadgetSchedule g;
  g.case_id = case_id;
  g.a_id = a.id;
  g.b_id = b.id;
  g.T_a = T_a;
  g.T_b = std::ldexp(T_a, -k);
  g.claimed_peak_ratio = frac(spec.peak_ratio);
  g.claimed_cost_blowup = frac(spec.cost_blowup);
  g.claimed_order_rate_blowup = frac(spec.order_rate_blowup);
  g.blowup_is_bound = spec.blowup_is_bound;

  const Rational cycle = frac(spec.a_cycle) * ta;
  CyclicSchedule sa;
  sa.cycle = cycle;
  sa.orders.push_back({0, cycle});
  sa.i0 = 0;

  CyclicSchedule sb;
  sb.cycle = cycle;
  Rational t = frac(spec.b_offset) * ta;
  for (int r = 0; r < spec.run_count; ++r) {
    const auto& run = spec.runs[r];
    Rational count = frac(run.count);
    if (run.per_tb) count *= Rational(BigInt(1) << k);
    if (count.get_den() != 1) throw DomainError("gadget run count is not integral");
    const Rational len = frac(run.length) * ratio * ta;
    for (long j = 0, n = count.get_num().get_si(); j < n; ++j) {
      sb.orders.push_back({fmod_pos(t, cycle), len});
      t += len;
    }
  }
  std::sort(sb.orders.begin(), sb.orders.end(), [](const Order& x, const Order& y) { return x.time < y.time; });
  sb.i0 = sb.orders.front().time;

  g.policy.schedules.emplace(a.id, std::move(sa));
  g.policy.schedules.emplace(b.id, std::move(sb));
  g.policy.components.push_back({a.id, b.id});
  return g;
}

GadgetSchedule build_pair(const Sub1Couple& couple) {
  validate_couple(couple);
  Commodity a = couple.a, b = couple.b;
  double ta = couple.T_a, tb = couple.T_b;
  if (tb > ta) {
    std::swap(a, b);
    std::swap(ta, tb);
  }
  const int k = *power_of_two_gap(ta, tb);
  return build_case(classify_case(ta, tb), a, b, ta, k);
}

GadgetReport verify_gadget(const Commodity& a_in, const Commodity& b_in, const GadgetSchedule& g, double eps,
                           double tol) {
  const Commodity& a = a_in.id == g.a_id ? a_in : b_in;
  const Commodity& b = a_in.id == g.a_id ? b_in : a_in;
  GadgetReport r;
  r.case_id = g.case_id;
  r.claimed_peak_ratio = g.claimed_peak_ratio;
  r.claimed_order_rate_blowup = g.claimed_order_rate_blowup;
  r.claimed_cost_blowup = to_double(g.claimed_cost_blowup);

  const auto& sa = g.policy.schedules.at(a.id);
  const auto& sb = g.policy.schedules.at(b.id);
  try {
    validate_schedule(a.id, sa);
    validate_schedule(b.id, sb);
    r.schedules_valid = true;
  } catch (const ScheduleInfeasible& e) {
    r.schedule_error = e.what();
    return r;
  }

  const std::vector<int> ids{a.id, b.id};
  const Rational vb = from_double(b.gamma) * from_double(g.T_b);

  Commodity a_norm = a;
  a_norm.gamma = b.gamma * g.T_b / g.T_a;  // exact: T_b / T_a is a power of 2
  const Instance normalized(1.0, {a_norm, b});
  const auto pn = exact_peak(normalized, g.policy, ids, std::uint64_t{1} << 40);
  r.measured_peak_ratio = pn->peak / vb;
  r.peak_epoch = pn->epoch;
  const double claimed = to_double(r.claimed_peak_ratio);
  r.peak_ok = std::abs(to_double(r.measured_peak_ratio) - claimed) <= tol * claimed;

  const Instance actual(1.0, {a, b});
  const auto pa = exact_peak(actual, g.policy, ids, std::uint64_t{1} << 40);
  r.actual_peak = to_double(pa->peak);
  r.actual_peak_bound = (1 + eps) * 0.875 * (a.gamma * g.T_a + b.gamma * g.T_b);
  r.actual_peak_ok = r.actual_peak <= r.actual_peak_bound * (1 + tol);

  const auto st_a = schedule_stats(a, sa);
  const auto st_b = schedule_stats(b, sb);
  r.cost_blowup_a = st_a.long_run_cost / eoq_cost({a.K, a.H}, g.T_a);
  r.cost_blowup_b = st_b.long_run_cost / eoq_cost({b.K, b.H}, g.T_b);
  const double worst = std::max(r.cost_blowup_a, r.cost_blowup_b);
  if (g.blowup_is_bound)
    r.blowup_ok = worst <= r.claimed_cost_blowup * (1 + tol);
  else
    r.blowup_ok = std::abs(worst - r.claimed_cost_blowup) <= tol * r.claimed_cost_blowup;

  r.order_rate_blowup_a = Rational(static_cast<long>(sa.orders.size())) / sa.cycle * from_double(g.T_a);
  r.order_rate_blowup_b = Rational(static_cast<long>(sb.orders.size())) / sb.cycle * from_double(g.T_b);
  r.order_rate_ok = std::max(r.order_rate_blowup_a, r.order_rate_blowup_b) == r.claimed_order_rate_blowup;
  return r;
}

}  // namespace ewls
