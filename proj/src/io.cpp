#include "ewls/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

Json bigint_to_json(const BigInt& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw DomainError("expected an integer or integer string");
}

Json opt_double(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json opt_rational(const std::optional<Rational>& v) { return v ? rational_to_json(*v) : Json(nullptr); }

double positive(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("missing numeric field ") + key);
  return j.at(key).get<double>();
}

}  // namespace

Json rational_to_json(const Rational& q) { return Json::array({bigint_to_json(q.get_num()), bigint_to_json(q.get_den())}); }

Rational rational_from_json(const Json& j) {
  if (j.is_number()) return from_double(j.get<double>());
  if (!j.is_array() || j.size() != 2) throw DomainError("rational must be [num, den] or a number");
  const BigInt den = bigint_from_json(j[1]);
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(bigint_from_json(j[0]), den);
  q.canonicalize();
  return q;
}

Json instance_to_json(const Instance& instance) {
  Json cs = Json::array();
  for (const auto& c : instance.commodities()) cs.push_back({{"id", c.id}, {"K", c.K}, {"H", c.H}, {"gamma", c.gamma}});
  return {{"capacity", instance.capacity()}, {"commodities", cs}};
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("commodities")) throw DomainError("instance JSON needs capacity and commodities");
  std::vector<Commodity> cs;
  for (const auto& c : j.at("commodities")) {
    if (!c.contains("id")) throw DomainError("commodity without id");
    cs.push_back({c.at("id").get<int>(), positive(c, "K"), positive(c, "H"), positive(c, "gamma")});
  }
  return Instance(positive(j, "capacity"), std::move(cs));
}

Json policy_to_json(const CyclicPolicy& policy) {
  Json scheds = Json::object();
  for (const auto& [id, s] : policy.schedules) {
    Json orders = Json::array();
    for (const auto& o : s.orders)
      orders.push_back({bigint_to_json(o.time.get_num()), bigint_to_json(o.time.get_den()), bigint_to_json(o.quantity.get_num()),
                        bigint_to_json(o.quantity.get_den())});
    scheds[std::to_string(id)] = {{"cycle", rational_to_json(s.cycle)}, {"orders", orders}, {"i0", rational_to_json(s.i0)}};
  }
  Json out = {{"schedules", scheds}};
  if (!policy.components.empty()) out["components"] = policy.components;
  return out;
}

CyclicPolicy policy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("schedules") || !j.at("schedules").is_object())
    throw DomainError("policy JSON needs a schedules object keyed by commodity id");
  CyclicPolicy p;
  for (const auto& [key, s] : j.at("schedules").items()) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != key.size()) throw DomainError("schedule key is not an integer id: " + key);
    CyclicSchedule cs;
    cs.cycle = rational_from_json(s.at("cycle"));
    cs.i0 = rational_from_json(s.at("i0"));
    for (const auto& o : s.at("orders")) {
      if (!o.is_array() || o.size() != 4) throw DomainError("order must be [t_num, t_den, q_num, q_den]");
      cs.orders.push_back({rational_from_json(Json::array({o[0], o[1]})), rational_from_json(Json::array({o[2], o[3]}))});
    }
    p.schedules.emplace(id, std::move(cs));
  }
  if (j.contains("components")) p.components = j.at("components").get<std::vector<std::vector<int>>>();
  return p;
}

Json certificate_to_json(const PolicyCertificate& cert) {
  Json per = Json::array();
  for (const auto& [id, st] : cert.per_commodity)
    per.push_back({{"id", id},
                   {"avg_inventory", st.avg_inventory},
                   {"long_run_cost", st.long_run_cost},
                   {"order_rate", st.order_rate},
                   {"peak_inventory", st.peak_inventory}});
  return {{"total_cost", cert.total_cost},
          {"avg_space", cert.avg_space},
          {"peak_space_exact", opt_double(cert.peak_space_exact)},
          {"peak_space_exact_q", opt_rational(cert.peak_space_exact_q)},
          {"peak_epoch", opt_rational(cert.peak_epoch)},
          {"peak_space_upper", cert.peak_space_upper},
          {"peak_space_sampled_lower", cert.peak_space_sampled_lower},
          {"component_count", cert.component_count},
          {"per_commodity", per}};
}

Json capacity_to_json(const CapacityReport& cap) {
  return {{"feasible", cap.feasible},
          {"exact", cap.exact},
          {"peak", cap.peak},
          {"capacity", cap.capacity},
          {"witness", opt_rational(cap.witness)}};
}

Json relax_to_json(const RelaxSolution& sol) {
  Json iv = Json::object();
  for (const auto& [id, T] : sol.intervals) iv[std::to_string(id)] = T;
  return {{"objective", sol.objective},
          {"budget", sol.budget},
          {"budget_used", sol.budget_used},
          {"lambda", sol.lambda},
          {"kkt_residual", sol.kkt_residual},
          {"intervals", iv}};
}

Json report_to_json(const PipelineReport& r) {
  const auto& c = r.classification;
  const auto ell_name = [](int ell) { return ell == kEllInfinity ? std::string("inf") : std::to_string(ell); };
  Json classes = Json::array();
  for (const auto& [ell, ids] : c.members) {
    std::string type = c.dense.count(ell) ? "dense" : "prefix";
    if (std::find(c.suffix.begin(), c.suffix.end(), ell) != c.suffix.end()) type = "suffix";
    Json e = {{"ell", ell_name(ell)}, {"size", ids.size()}, {"type", type}, {"volume", c.class_volume.at(ell)}};
    if (c.dense.count(ell)) {
      e["overestimate"] = c.overestimate.at(ell);
      e["N_tilde"] = c.N_tilde.at(ell);
    }
    classes.push_back(e);
  }
  Json built = Json::array();
  for (const auto& s : r.classes)
    built.push_back({{"ell", ell_name(s.ell)},
                     {"size", s.size},
                     {"branch", s.kind},
                     {"heavy", s.heavy},
                     {"light", s.light},
                     {"near_pairs", s.near_pairs},
                     {"far_pairs", s.far_pairs},
                     {"space_ratio", s.space_ratio},
                     {"cost_ratio", s.cost_ratio},
                     {"space_bound_ratio", s.space_bound_ratio},
                     {"space_bound_ok", s.space_bound_ok},
                     {"event_A", {{"measured", s.event_lhs}, {"bound", s.event_rhs}}},
                     {"Q_used", s.Q_used},
                     {"flags", s.flags}});
  Json out = {
      {"scenario", to_string(r.scenario)},
      {"benchmark_source", r.benchmark_source},
      {"classification",
       {{"eps", c.eps},
        {"capacity", c.capacity},
        {"n", c.n},
        {"L", c.L},
        {"Delta", c.Delta},
        {"sparse_threshold", c.sparse_threshold},
        {"V_S", c.V_S},
        {"V_D", c.V_D},
        {"V_prefix", c.V_prefix},
        {"V_suffix", c.V_suffix},
        {"V_tilde_D", c.V_tilde_D},
        {"classes", classes},
        {"warnings", c.warnings}}},
      {"classes_built", built},
      {"cost", {{"measured", r.final_certificate.total_cost}, {"lower_bound", r.lower_bound}, {"ratio", r.ratio_vs_lower_bound}}},
      {"scaling",
       {{"analytic_factor", r.analytic_factor},
        {"measured_factor", r.measured_factor},
        {"applied_factor", r.applied_factor},
        {"pre_scale_peak", r.pre_scale_peak},
        {"pre_scale_peak_exact", r.pre_scale_peak_exact},
        {"pre_scale_cost", r.pre_scale_cost}}},
      {"suffix", {{"measured_peak", r.suffix_peak}, {"bound", r.suffix_bound}}},
      {"suffix_dense", {{"measured_peak", r.suffix_dense_peak}, {"bound", r.dense_bound}}},
      {"capacity_check", capacity_to_json(r.capacity)},
      {"certificate", certificate_to_json(r.final_certificate)},
      {"guarantee_flags", r.guarantee_flags}};
  if (r.mimic)
    out["mimicking"] = {{"matched_weight", r.mimic->matched_weight},
                        {"identity_weight", r.mimic->identity_weight},
                        {"benchmark_cost", r.mimic->benchmark_cost},
                        {"cost_bound_ok", r.mimic->lemma6_ok},
                        {"certified", r.mimic->certified}};
  if (r.enumeration)
    out["enumeration"] = {{"predicted", r.enumeration->predicted},
                          {"tried", r.enumeration->tried},
                          {"feasible", r.enumeration->feasible},
                          {"best_cost", r.enumeration->best_cost},
                          {"oracle_cost", r.enumeration->oracle_cost},
                          {"oracle_guess_enumerated", r.enumeration->oracle_guess_enumerated}};
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const Instance& instance, const CyclicPolicy& policy, double horizon,
                     std::size_t samples) {
  out << "t,commodity_id,inventory,total_space\n";
  out.precision(17);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(samples);
    const Rational tq = from_double(t);
    std::vector<std::pair<int, double>> rows;
    double total = 0;
    for (const auto& [id, s] : policy.schedules) {
      const double inv = to_double(inventory_at(s, tq));
      rows.emplace_back(id, inv);
      total += instance.by_id(id).gamma * inv;
    }
    for (const auto& [id, inv] : rows) out << t << ',' << id << ',' << inv << ',' << total << '\n';
  }
}

}  // namespace ewls
