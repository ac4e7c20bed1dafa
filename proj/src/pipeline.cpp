#include "ewls/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"

namespace ewls {

Tuning Tuning::paper(double eps) {
  Tuning t;
  t.eps = eps;
  t.sparse_threshold = paper_sparse_threshold(eps);
  return t;
}

Tuning Tuning::desk(double eps) {
  Tuning t;
  t.eps = eps;
  t.sparse_threshold = static_cast<double>(default_Q(eps)) * min_group_size(eps);
  return t;
}

double Tuning::threshold() const { return sparse_threshold > 0 ? sparse_threshold : paper_sparse_threshold(eps); }

double paper_sparse_threshold(double eps) { return 100.0 * std::log(1.0 / eps) / std::pow(eps, 4); }

int class_count_L(std::size_t n, double eps) {
  return static_cast<int>(std::ceil(std::log(static_cast<double>(n) / eps) / std::log1p(eps) - 1e-12));
}

int prefix_span_Delta(double eps) {
  return static_cast<int>(std::ceil(std::log(125.0 / std::pow(eps, 7)) / std::log1p(eps) - 1e-12));
}

double VolumeClassification::class_cap(int ell) const {
  if (ell == kEllInfinity) return eps * capacity / static_cast<double>(n);
  return capacity / std::pow(1 + eps, ell - 1);
}

std::vector<int> VolumeClassification::commodities_of(const std::vector<int>& classes) const {
  std::vector<int> out;
  for (int ell : classes) {
    auto it = members.find(ell);
    if (it != members.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double round_up_to(double x, double unit) {
  if (x <= 0) return 0;
  const double k = std::ceil(x / unit - 1e-12);
  return std::max(k * unit, x);
}

void recompute(VolumeClassification& cls) {
  cls.V_S = cls.V_D = cls.V_prefix = cls.V_suffix = 0;
  for (int ell : cls.prefix) cls.V_prefix += cls.class_volume[ell];
  for (int ell : cls.suffix) cls.V_suffix += cls.class_volume[ell];
  for (int ell : cls.dense) cls.V_D += cls.class_volume[ell];
  cls.V_S = cls.V_prefix + cls.V_suffix;
  cls.overestimate.clear();
  cls.N_tilde.clear();
  const double unit = cls.dense.empty() ? cls.eps * cls.capacity : cls.eps * cls.capacity / static_cast<double>(cls.dense.size());
  for (int ell : cls.dense) {
    const double vt = round_up_to(cls.class_volume[ell], unit);
    cls.overestimate[ell] = vt;
    cls.N_tilde[ell] = ell == kEllInfinity ? static_cast<double>(cls.n) : std::pow(1 + cls.eps, ell) * vt / cls.capacity;
  }
  cls.V_tilde_D = round_up_to(cls.V_D, cls.eps * cls.capacity);
}

}  // namespace

void apply_types(VolumeClassification& cls, const std::map<int, ClassType>& types) {
  cls.sparse.clear();
  cls.dense.clear();
  cls.prefix.clear();
  cls.suffix.clear();
  for (const auto& [ell, ids] : cls.members) {
    const auto it = types.find(ell);
    const ClassType t = it == types.end() ? ClassType::prefix : it->second;
    if (t == ClassType::dense) {
      cls.dense.insert(ell);
    } else {
      cls.sparse.insert(ell);
      (t == ClassType::prefix ? cls.prefix : cls.suffix).push_back(ell);
    }
  }
  recompute(cls);
}

VolumeClassification classify_volumes(const Instance& instance, const PolicyCertificate& bench, const Tuning& tuning) {
  const double eps = tuning.eps;
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie in (0, 1)");
  VolumeClassification cls;
  cls.eps = eps;
  cls.capacity = instance.capacity();
  cls.n = instance.size();
  cls.L = class_count_L(cls.n, eps);
  cls.Delta = prefix_span_Delta(eps);
  cls.sparse_threshold = tuning.threshold();
  const double base = 1 + eps;
  for (const auto& c : instance.commodities()) {
    const auto& st = bench.per_commodity.at(c.id);
    cls.avg_inventory[c.id] = st.avg_inventory;
    cls.benchmark_cost[c.id] = st.long_run_cost;
    const double x = c.gamma * st.avg_inventory / cls.capacity;
    int ell;
    if (x > 1) {
      ell = 1;
      cls.warnings.push_back("commodity " + std::to_string(c.id) + " exceeds class 1 band");
    } else {
      ell = static_cast<int>(std::floor(std::log(1 / x) / std::log1p(eps))) + 1;
      while (ell > 1 && x > std::pow(base, -(ell - 1))) --ell;
      while (x <= std::pow(base, -ell)) ++ell;
      if (ell > cls.L) ell = kEllInfinity;
    }
    cls.class_of[c.id] = ell;
    cls.members[ell].push_back(c.id);
    cls.class_volume[ell] += c.gamma * st.avg_inventory;
  }
  std::map<int, ClassType> types;
  int sparse_seen = 0;
  for (const auto& [ell, ids] : cls.members) {
    if (static_cast<double>(ids.size()) > cls.sparse_threshold) {
      types[ell] = ClassType::dense;
    } else {
      types[ell] = sparse_seen < cls.Delta ? ClassType::prefix : ClassType::suffix;
      ++sparse_seen;
    }
  }
  apply_types(cls, types);
  return cls;
}

VolumeClassification classify_volumes(const Instance& instance, const CyclicPolicy& benchmark, const Tuning& tuning,
                                      const EvalOptions& eval) {
  const auto cert = evaluate_policy(instance, benchmark, eval);
  auto cls = classify_volumes(instance, cert, tuning);
  if (!check_capacity_feasible(instance, cert).feasible) cls.warnings.push_back("benchmark is not capacity-feasible");
  return cls;
}

double interval_cap(const VolumeClassification& cls, int ell, double gamma) {
  if (ell == kEllInfinity) return 2 * cls.eps * cls.capacity / (static_cast<double>(cls.n) * gamma);
  return 2 * cls.capacity / (std::pow(1 + cls.eps, ell - 1) * gamma);
}

MimickingResult mimicking_partition(const Instance& instance, const VolumeClassification& cls, const Tuning&) {
  MimickingResult res;
  std::vector<int> right(cls.suffix.begin(), cls.suffix.end());
  right.insert(right.end(), cls.dense.begin(), cls.dense.end());
  std::sort(right.begin(), right.end());
  const auto U = cls.commodities_of(right);
  if (U.empty()) {
    res.lemma6_ok = res.certified = true;
    return res;
  }
  auto& p = res.problem;
  p.left = U;
  p.right = right;
  const long lower_dense = static_cast<long>(std::ceil(cls.sparse_threshold - 1e-9));
  for (int ell : right) {
    const long size = static_cast<long>(cls.members.at(ell).size());
    if (cls.dense.count(ell)) {
      long upper = static_cast<long>(U.size());
      if (ell != kEllInfinity) upper = static_cast<long>(std::floor(cls.N_tilde.at(ell) + 1e-9));
      if (upper < size) {
        res.flags.push_back("N_tilde_below_class_size:" + std::to_string(ell));
        upper = size;
      }
      p.bounds.emplace_back(std::min(lower_dense, size), upper);
    } else {
      p.bounds.emplace_back(size, size);
    }
  }
  for (int id : U) {
    const auto& c = instance.by_id(id);
    std::vector<double> row;
    for (int ell : right) row.push_back(capped_eoq({c.K, c.H}, interval_cap(cls, ell, c.gamma)).cost);
    p.weights.push_back(std::move(row));
    const auto home = std::find(right.begin(), right.end(), cls.class_of.at(id)) - right.begin();
    res.identity_weight += p.weights.back()[static_cast<std::size_t>(home)];
    res.benchmark_cost += cls.benchmark_cost.at(id);
  }
  const auto m = bmatching_min_cost(p);
  res.matched_weight = m.weight;
  res.certified = m.certified;
  for (std::size_t i = 0; i < U.size(); ++i) {
    const int ell = right[static_cast<std::size_t>(m.assignment[i])];
    const auto& c = instance.by_id(U[i]);
    res.partition[ell].push_back(U[i]);
    res.T_hat[U[i]] = capped_eoq({c.K, c.H}, interval_cap(cls, ell, c.gamma)).T;
  }
  res.lemma6_ok = res.matched_weight <= res.benchmark_cost * (1 + 1e-9);
  if (!res.lemma6_ok) res.flags.push_back("matched_weight_exceeds_benchmark_cost");
  return res;
}

SuffixDenseResult build_suffix_dense_policy(const Instance& instance, const VolumeClassification& cls,
                                            const MimickingResult& mimic, const Tuning& tuning, std::uint64_t seed,
                                            const EvalOptions& eval) {
  SuffixDenseResult res;
  res.suffix_bound = 4 * cls.eps * cls.capacity;
  res.dense_bound = (1 + 8 * cls.eps) * 1.75 * po2_inflation() * cls.V_D + 10 * cls.eps * cls.capacity;
  CyclicPolicy suffix_policy;
  std::vector<Commodity> suffix_cs, all_cs;
  for (const auto& [ell, ids] : mimic.partition) {
    ClassSummary s;
    s.ell = ell;
    s.size = ids.size();
    if (!cls.dense.count(ell)) {
      s.kind = "suffix";
      s.cost_ratio = 1;
      for (int id : ids) {
        suffix_policy.schedules.emplace(id, sosi_schedule(mimic.T_hat.at(id), 0.0));
        suffix_cs.push_back(instance.by_id(id));
      }
    } else {
      ClassInput in;
      if (ell != kEllInfinity) in.ell = ell;
      in.cap = cls.class_cap(ell);
      in.members = ids;
      for (int id : ids) in.T_hat[id] = mimic.T_hat.at(id);
      ClassConfig cc;
      cc.eps = cls.eps;
      cc.Q = tuning.Q;
      cc.heavy_fraction = tuning.heavy_fraction;
      cc.seed = seed;
      cc.draw = 0;
      const auto r = build_class_policy(instance, in, cc);
      s.kind = to_string(r.branch);
      s.heavy = r.heavy;
      s.light = r.light;
      s.near_pairs = r.near_pairs;
      s.far_pairs = r.far_pairs;
      s.space_ratio = r.space_ratio;
      s.cost_ratio = r.cost_ratio;
      s.space_bound_ratio = r.space_bound / (static_cast<double>(ids.size()) * in.cap);
      s.space_bound_ok = r.space_bound_ok;
      s.event_lhs = r.event.lhs;
      s.event_rhs = r.event.rhs;
      s.Q_used = r.Q_used;
      s.flags = r.flags;
      merge_into(res.policy, r.policy);
    }
    for (int id : ids) all_cs.push_back(instance.by_id(id));
    res.classes.push_back(std::move(s));
  }
  if (!suffix_cs.empty()) {
    const Instance sub(instance.capacity(), suffix_cs);
    res.suffix_peak = evaluate_policy(sub, suffix_policy, eval).peak_space_upper;
    if (res.suffix_peak > res.suffix_bound * (1 + 1e-9)) res.flags.push_back("suffix_peak_above_4eps_bound");
  }
  merge_into(res.policy, suffix_policy);
  if (!all_cs.empty()) {
    const Instance sub(instance.capacity(), all_cs);
    res.certificate = evaluate_policy(sub, res.policy, eval);
    if (res.certificate.peak_space_upper > res.dense_bound * (1 + 1e-9) && suffix_cs.empty())
      res.flags.push_back("suffix_dense_peak_above_analytic_bound");
  }
  return res;
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::easy_sparse: return "easy_sparse";
    case Scenario::difficult_lowD: return "difficult_lowD";
    case Scenario::difficult_dense: return "difficult_dense";
  }
  return "?";
}

Scenario choose_scenario(const VolumeClassification& cls, double delta) {
  if (cls.V_S >= (0.5 + delta) * cls.capacity) return Scenario::easy_sparse;
  if (cls.V_D < (0.5 - 2 * delta) * cls.capacity) return Scenario::difficult_lowD;
  return Scenario::difficult_dense;
}

namespace {

std::vector<Commodity> pick(const Instance& instance, const std::vector<int>& ids) {
  std::vector<Commodity> out;
  for (int id : ids) out.push_back(instance.by_id(id));
  return out;
}

void add_relaxed(CyclicPolicy& into, const std::vector<Commodity>& cs, double budget, double shrink) {
  if (cs.empty()) return;
  const auto sol = solve_relax_exact(cs, budget);
  for (const auto& [id, T] : sol.intervals) into.schedules.emplace(id, sosi_schedule(T * shrink, 0.0));
}

struct Candidate {
  Scenario scenario = Scenario::difficult_lowD;
  CyclicPolicy policy;
  double analytic_factor = 0;
  std::vector<ClassSummary> classes;
  std::optional<MimickingResult> mimic;
  double suffix_peak = 0, suffix_bound = 0, dense_bound = 0, suffix_dense_peak = 0;
  std::vector<std::string> flags;
};

Candidate construct(const Instance& instance, const VolumeClassification& cls, const Sub2Options& opt) {
  const double eps = cls.eps, V = cls.capacity, delta = opt.tuning.delta;
  Candidate c;
  c.scenario = choose_scenario(cls, delta);
  const auto prefix_ids = cls.commodities_of(cls.prefix);
  std::vector<int> sd_classes(cls.suffix.begin(), cls.suffix.end());
  sd_classes.insert(sd_classes.end(), cls.dense.begin(), cls.dense.end());
  const auto sd_ids = cls.commodities_of(sd_classes);

  switch (c.scenario) {
    case Scenario::easy_sparse: {
      c.analytic_factor = 2 - 2 * delta + 4 * eps;
      const auto pcs = pick(instance, prefix_ids);
      if (!pcs.empty()) {
        if (opt.prefix_solver == PrefixSolver::small_search && pcs.size() <= 3) {
          c.flags.push_back("prefix_solver:small_search_substitute");
          for (const auto& [id, e] : small_instance_search(pcs, V)) c.policy.schedules.emplace(id, sosi_schedule(e.T, e.phase));
        } else {
          c.flags.push_back("prefix_solver:relax_halve_substitute");
          add_relaxed(c.policy, pcs, 2 * V, 0.5);
        }
      }
      add_relaxed(c.policy, pick(instance, sd_ids), 2 * (cls.V_tilde_D + eps * V), 1.0);
      break;
    }
    case Scenario::difficult_lowD: {
      c.analytic_factor = 2 - 2 * delta + 2 * eps;
      std::vector<int> all;
      for (const auto& cm : instance.commodities()) all.push_back(cm.id);
      const double vt = round_up_to(cls.V_S + cls.V_D, eps * V);
      add_relaxed(c.policy, pick(instance, all), 2 * vt, 1.0);
      break;
    }
    case Scenario::difficult_dense: {
      c.analytic_factor = (1 + 8 * eps) * (1 + 0.875 * po2_inflation() + delta / 2 + 12 * eps);
      add_relaxed(c.policy, pick(instance, prefix_ids), 2 * round_up_to(cls.V_prefix, eps * V), 1.0);
      auto mimic = mimicking_partition(instance, cls, opt.tuning);
      const auto sd = build_suffix_dense_policy(instance, cls, mimic, opt.tuning, opt.seed, opt.eval);
      c.classes = sd.classes;
      c.suffix_peak = sd.suffix_peak;
      c.suffix_bound = sd.suffix_bound;
      c.dense_bound = sd.dense_bound;
      c.suffix_dense_peak = sd.certificate.peak_space_upper;
      c.flags.insert(c.flags.end(), sd.flags.begin(), sd.flags.end());
      c.flags.insert(c.flags.end(), mimic.flags.begin(), mimic.flags.end());
      for (const auto& s : sd.classes)
        for (const auto& f : s.flags) c.flags.push_back("class " + std::to_string(s.ell) + ": " + f);
      merge_into(c.policy, sd.policy);
      c.mimic = std::move(mimic);
      break;
    }
  }
  return c;
}

struct Finalized {
  CyclicPolicy policy;
  PolicyCertificate certificate;
  CapacityReport capacity;
  double pre_peak = 0;
  bool pre_exact = false;
  double pre_cost = 0;
  double measured = 0;
  double applied = 1;
};

Finalized finalize(const Instance& instance, const CyclicPolicy& policy, const EvalOptions& eval) {
  Finalized f;
  const auto cert = evaluate_policy(instance, policy, eval);
  f.pre_cost = cert.total_cost;
  f.pre_exact = cert.peak_space_exact_q.has_value();
  f.pre_peak = f.pre_exact ? *cert.peak_space_exact : cert.peak_space_upper;
  f.measured = f.pre_peak / instance.capacity();
  if (f.measured <= 1) {
    f.policy = policy;
    f.certificate = cert;
    if (f.measured > 0 && f.measured < 1) {
      const Rational s = f.pre_exact ? from_double(instance.capacity()) / *cert.peak_space_exact_q
                                     : from_double(instance.capacity() / cert.peak_space_upper);
      auto up = scale_policy(policy, s);
      auto up_cert = evaluate_policy(instance, up, eval);
      if (check_capacity_feasible(instance, up_cert, 0.0).feasible && up_cert.total_cost < cert.total_cost) {
        f.policy = std::move(up);
        f.certificate = std::move(up_cert);
        f.applied = 1 / to_double(s);
      }
    }
  } else {
    Rational s = f.pre_exact ? from_double(instance.capacity()) / *cert.peak_space_exact_q
                             : from_double(instance.capacity() / cert.peak_space_upper);
    for (int attempt = 0;; ++attempt) {
      f.policy = scale_policy(policy, s);
      f.certificate = evaluate_policy(instance, f.policy, eval);
      if (check_capacity_feasible(instance, f.certificate, 0.0).feasible || attempt == 8) break;
      s *= from_double(1 - 1e-12);
    }
    f.applied = 1 / to_double(s);
  }
  f.capacity = check_capacity_feasible(instance, f.certificate);
  return f;
}

std::vector<std::string> common_flags(const Sub2Options& opt) {
  std::vector<std::string> flags;
  if (!(opt.tuning.eps < 0.1)) flags.push_back("eps_outside_(0,1/10):desk_scale");
  if (std::abs(opt.tuning.threshold() - paper_sparse_threshold(opt.tuning.eps)) > 1e-9)
    flags.push_back("sparse_threshold_preset:" + std::to_string(opt.tuning.threshold()));
  if (opt.tuning.Q > 0 && opt.tuning.Q != default_Q(opt.tuning.eps)) flags.push_back("Q_override:" + std::to_string(opt.tuning.Q));
  return flags;
}

}  // namespace

PipelineReport run_sub2(const Instance& instance, const Sub2Options& opt) {
  PipelineReport rep;
  rep.guarantee_flags = common_flags(opt);
  PolicyCertificate bench;
  if (opt.benchmark) {
    rep.benchmark_source = "oracle_file";
    bench = evaluate_policy(instance, *opt.benchmark, opt.eval);
    if (!check_capacity_feasible(instance, bench).feasible) rep.guarantee_flags.push_back("benchmark_not_capacity_feasible");
  } else {
    rep.benchmark_source = "classical2_standin";
    rep.guarantee_flags.push_back("benchmark:classical2_standin");
    bench = classical_two_approx(instance, opt.eval).certificate;
  }
  rep.classification = classify_volumes(instance, bench, opt.tuning);
  for (const auto& w : rep.classification.warnings) rep.guarantee_flags.push_back("classification: " + w);
  rep.lower_bound = solve_relax_exact(instance, 2 * instance.capacity()).objective;

  Candidate chosen;
  Finalized fin;
  if (!opt.enumerate) {
    chosen = construct(instance, rep.classification, opt);
    fin = finalize(instance, chosen.policy, opt.eval);
  } else {
    const auto& base = rep.classification;
    std::vector<int> all_classes;
    for (int ell = 1; ell <= base.L; ++ell) all_classes.push_back(ell);
    all_classes.push_back(kEllInfinity);
    const auto vd_steps = static_cast<std::uint64_t>(std::ceil(1 / base.eps - 1e-12)) + 1;
    double predicted = std::pow(3.0, static_cast<double>(all_classes.size())) * static_cast<double>(vd_steps);
    if (predicted > static_cast<double>(opt.enumerate_cap))
      throw ParameterError("enumeration would try " + std::to_string(predicted) + " guesses, above the cap");
    EnumerationSummary es;
    es.predicted = static_cast<std::uint64_t>(predicted);
    std::map<int, ClassType> oracle_types;
    for (int ell : base.prefix) oracle_types[ell] = ClassType::prefix;
    for (int ell : base.suffix) oracle_types[ell] = ClassType::suffix;
    for (int ell : base.dense) oracle_types[ell] = ClassType::dense;
    const double unit = base.eps * base.capacity;
    std::map<std::pair<std::vector<int>, std::uint64_t>, double> seen;
    bool have = false;
    const auto total = static_cast<std::uint64_t>(std::pow(3.0, static_cast<double>(all_classes.size())));
    for (std::uint64_t code = 0; code < total; ++code) {
      std::map<int, ClassType> types;
      std::uint64_t x = code;
      for (int ell : all_classes) {
        types[ell] = static_cast<ClassType>(x % 3);
        x /= 3;
      }
      std::vector<int> key;
      for (const auto& [ell, ids] : base.members) key.push_back(static_cast<int>(types[ell]));
      for (std::uint64_t v = 0; v < vd_steps; ++v) {
        ++es.tried;
        if (seen.count({key, v})) continue;
        auto cls = base;
        apply_types(cls, types);
        cls.V_tilde_D = static_cast<double>(v) * unit;
        bool is_oracle = true;
        for (const auto& [ell, ids] : base.members) is_oracle = is_oracle && types[ell] == oracle_types[ell];
        is_oracle = is_oracle && std::abs(cls.V_tilde_D - base.V_tilde_D) <= 1e-9 * unit;
        double cost = std::numeric_limits<double>::infinity();
        try {
          auto cand = construct(instance, cls, opt);
          auto f = finalize(instance, cand.policy, opt.eval);
          if (f.capacity.feasible) {
            ++es.feasible;
            cost = f.certificate.total_cost;
            if (!have || cost < fin.certificate.total_cost) {
              chosen = std::move(cand);
              fin = std::move(f);
              have = true;
            }
          }
        } catch (const MatchingInfeasible&) {
        } catch (const DomainError&) {
        }
        seen[{key, v}] = cost;
        if (is_oracle) {
          es.oracle_guess_enumerated = true;
          es.oracle_cost = cost;
        }
      }
    }
    if (!have) throw DomainError("no enumerated guess produced a feasible policy");
    es.best_cost = fin.certificate.total_cost;
    rep.enumeration = es;
    rep.guarantee_flags.push_back("enumerate_mode");
  }

  rep.scenario = chosen.scenario;
  rep.analytic_factor = chosen.analytic_factor;
  rep.classes = chosen.classes;
  rep.mimic = chosen.mimic;
  rep.suffix_peak = chosen.suffix_peak;
  rep.suffix_bound = chosen.suffix_bound;
  rep.dense_bound = chosen.dense_bound;
  rep.suffix_dense_peak = chosen.suffix_dense_peak;
  rep.guarantee_flags.insert(rep.guarantee_flags.end(), chosen.flags.begin(), chosen.flags.end());
  rep.final_policy = std::move(fin.policy);
  rep.final_certificate = std::move(fin.certificate);
  rep.capacity = fin.capacity;
  rep.pre_scale_peak = fin.pre_peak;
  rep.pre_scale_peak_exact = fin.pre_exact;
  rep.pre_scale_cost = fin.pre_cost;
  rep.measured_factor = fin.measured;
  rep.applied_factor = fin.applied;
  if (fin.measured > rep.analytic_factor * (1 + 1e-12))
    rep.guarantee_flags.push_back("analytic_factor_insufficient:measured_applied");
  else if (fin.measured < rep.analytic_factor)
    rep.guarantee_flags.push_back("analytic_factor_slack:measured_applied");
  if (!fin.pre_exact) rep.guarantee_flags.push_back("peak_from_component_upper_bound");
  if (fin.applied < 1) rep.guarantee_flags.push_back("scaled_up_to_capacity");
  rep.ratio_vs_lower_bound = rep.final_certificate.total_cost / rep.lower_bound;
  return rep;
}

SosiVector small_instance_search(const std::vector<Commodity>& cs, double capacity) {
  if (cs.empty() || cs.size() > 3) throw DomainError("small search handles 1 to 3 commodities");
  std::vector<int> ids;
  for (const auto& c : cs) ids.push_back(c.id);
  const Instance inst(capacity, cs);
  const auto relax = solve_relax_exact(cs, 2 * capacity);
  SosiVector best;
  for (const auto& [id, T] : relax.intervals) best[id] = {T / 2, 0.0};
  double best_cost = evaluate_policy(inst, sosi_to_cyclic(best), {64, 100000, true}).total_cost;

  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& [id, T] : relax.intervals) {
    lo = std::min(lo, T / 4);
    hi = std::max(hi, T);
  }
  const int grid = 16;
  const std::size_t m = cs.size();
  for (int gstep = 0; gstep < grid; ++gstep) {
    // Dyadic base keeps every candidate's hyperperiod finite and small.
    const double raw = lo * std::pow(hi / lo, static_cast<double>(gstep) / (grid - 1));
    int e = 0;
    const double mant = std::frexp(raw, &e);
    const double base = std::ldexp(std::round(mant * 64) / 64, e);
    std::vector<std::vector<int>> shifts(m);
    for (std::size_t i = 0; i < m; ++i) {
      const int k = static_cast<int>(std::lround(std::log2(relax.intervals.at(ids[i]) / base)));
      for (int d = -2; d <= 0; ++d) shifts[i].push_back(k + d);
    }
    const std::size_t combos_shift = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(m)));
    const std::size_t combos_phase = static_cast<std::size_t>(std::pow(4.0, static_cast<double>(m - 1)));
    for (std::size_t a = 0; a < combos_shift; ++a) {
      SosiVector cand;
      std::size_t x = a;
      for (std::size_t i = 0; i < m; ++i) {
        cand[ids[i]] = {std::ldexp(base, shifts[i][x % 3]), 0.0};
        x /= 3;
      }
      double lower_cost = 0;
      for (const auto& c : cs) lower_cost += eoq_cost({c.K, c.H}, cand[c.id].T);
      if (lower_cost >= best_cost) continue;
      for (std::size_t b = 0; b < combos_phase; ++b) {
        std::size_t y = b;
        for (std::size_t i = 1; i < m; ++i) {
          cand[ids[i]].phase = cand[ids[i]].T * static_cast<double>(y % 4) / 4.0;
          y /= 4;
        }
        const auto cert = evaluate_policy(inst, sosi_to_cyclic(cand), {16, 100000, true});
        if (cert.peak_space_exact && *cert.peak_space_exact <= capacity && cert.total_cost < best_cost) {
          best = cand;
          best_cost = cert.total_cost;
        }
      }
    }
  }
  return best;
}

}  // namespace ewls
