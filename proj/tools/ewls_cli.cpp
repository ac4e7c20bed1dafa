#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "ewls/errors.hpp"
#include "ewls/gadget.hpp"
#include "ewls/generators.hpp"
#include "ewls/io.hpp"
#include "ewls/pipeline.hpp"
#include "ewls/po2sync.hpp"
#include "ewls/relax.hpp"

using namespace ewls;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerifyFailed = 2;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("EWLS_SEED")) return std::strtoull(s, nullptr, 10);
  return 1;
}

void emit(const Json& j, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(path, j);
}

Json gadget_json(const GadgetReport& r) {
  return {{"case", r.case_id},
          {"peak_ratio", {{"measured", rational_to_json(r.measured_peak_ratio)}, {"claimed", rational_to_json(r.claimed_peak_ratio)}, {"ok", r.peak_ok}}},
          {"peak_epoch", rational_to_json(r.peak_epoch)},
          {"actual_peak", {{"measured", r.actual_peak}, {"bound", r.actual_peak_bound}, {"ok", r.actual_peak_ok}}},
          {"cost_blowup",
           {{"measured_a", r.cost_blowup_a}, {"measured_b", r.cost_blowup_b}, {"claimed", r.claimed_cost_blowup}, {"ok", r.blowup_ok}}},
          {"order_rate_blowup",
           {{"measured_a", rational_to_json(r.order_rate_blowup_a)},
            {"measured_b", rational_to_json(r.order_rate_blowup_b)},
            {"claimed", rational_to_json(r.claimed_order_rate_blowup)},
            {"ok", r.order_rate_ok}}},
          {"schedules_valid", r.schedules_valid},
          {"passed", r.passed()}};
}

struct GadgetParams {
  double K_a = 1, H_a = 1, gamma_a = 1, K_b = 1, H_b = 1;
  std::optional<double> gamma_b;  // default: gamma_A T_A = gamma_B T_B
};

std::pair<GadgetSchedule, GadgetReport> run_gadget(int case_id, int k6, const GadgetParams& gp = {}) {
  const Commodity a{0, gp.K_a, gp.H_a, gp.gamma_a};
  Commodity b{1, gp.K_b, gp.H_b, 1};
  auto g = build_case(case_id, a, b, 1.0, k6);
  b.gamma = gp.gamma_b ? *gp.gamma_b : gp.gamma_a * g.T_a / g.T_b;
  auto r = verify_gadget(a, b, g);
  return {std::move(g), r};
}

Json check_json(const CheckReport& r) {
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = v;
  return {{"name", r.name}, {"passed", r.passed}, {"stats", stats}, {"detail", r.detail}};
}

CheckReport run_check(const std::string& name, const CheckConfig& cfg) {
  if (name == "claim3") return check_claim3(cfg);
  if (name == "claim4") return check_claim4(cfg);
  if (name == "lemma10") return check_lemma10(cfg);
  if (name == "lemma12") return check_lemma12(cfg);
  throw ParameterError("unknown check " + name);
}

CheckReport classical_chain(std::uint64_t seed, int instances) {
  CheckReport rep;
  rep.name = "classical2";
  rep.passed = true;
  double worst = 0;
  for (int t = 0; t < instances; ++t) {
    CounterRng rng(seed, stream_id(5, static_cast<std::uint64_t>(t)));
    const auto inst = random_instance(2 + static_cast<std::size_t>(rng.uniform(0, 48)), rng, rng.uniform(0.2, 0.9));
    const auto res = classical_two_approx(inst);
    const double ratio = res.certificate.total_cost / res.relaxation.objective;
    worst = std::max(worst, ratio);
    if (!check_capacity_feasible(inst, res.certificate).feasible || ratio > 2 + 1e-9 || ratio < 1 - 1e-9) rep.passed = false;
  }
  rep.stats = {{"instances", instances}, {"worst_ratio", worst}};
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Economic warehouse lot scheduling toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads for Monte Carlo checks")->check(CLI::PositiveNumber);

  std::uint64_t seed = default_seed();
  std::string out, report_path, instance_path, policy_path, benchmark_path, trace_path;

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::size_t gen_n = 30;
  std::string profile = "uniform";
  gen->add_option("--n", gen_n)->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--profile", profile)->check(CLI::IsMember({"uniform", "dense-heavy", "two-scale"}));
  gen->add_option("--out", out);

  auto* solve = app.add_subcommand("solve", "Compute a policy");
  std::string algorithm = "sub2", preset = "desk", prefix_solver = "relax-halve";
  double eps = 0.3, delta = 17.0 / 10000.0;
  bool enumerate = false;
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--algorithm", algorithm)->check(CLI::IsMember({"classical2", "sub2", "relax-exact", "relax-dp"}));
  solve->add_option("--epsilon", eps);
  solve->add_option("--delta", delta);
  solve->add_option("--seed", seed);
  solve->add_option("--benchmark", benchmark_path);
  solve->add_option("--out", out);
  solve->add_option("--report", report_path);
  solve->add_option("--preset", preset)->check(CLI::IsMember({"desk", "paper"}));
  solve->add_option("--prefix-solver", prefix_solver)->check(CLI::IsMember({"relax-halve", "small-search"}));
  solve->add_flag("--enumerate", enumerate);

  auto* eval = app.add_subcommand("eval", "Evaluate a policy");
  std::size_t grid = 4096, trace_samples = 1000;
  eval->add_option("--instance", instance_path)->required();
  eval->add_option("--policy", policy_path)->required();
  eval->add_option("--grid", grid);
  eval->add_option("--out", out);
  eval->add_option("--trace", trace_path, "CSV trace over one hyperperiod or the longest cycle");
  eval->add_option("--trace-samples", trace_samples);

  auto* gadget = app.add_subcommand("gadget", "Verify a two-commodity gadget case");
  int case_id = 1, k6 = 5;
  gadget->add_option("--case", case_id)->check(CLI::Range(1, 6));
  gadget->add_option("--k", k6, "Case 6 exponent (>= 5)");
  gadget->add_option("--out", out);
  GadgetParams gp;
  double gamma_b = 0;
  gadget->add_option("--K-a", gp.K_a)->check(CLI::PositiveNumber);
  gadget->add_option("--H-a", gp.H_a)->check(CLI::PositiveNumber);
  gadget->add_option("--gamma-a", gp.gamma_a)->check(CLI::PositiveNumber);
  gadget->add_option("--K-b", gp.K_b)->check(CLI::PositiveNumber);
  gadget->add_option("--H-b", gp.H_b)->check(CLI::PositiveNumber);
  auto* gamma_b_opt = gadget->add_option("--gamma-b", gamma_b)->check(CLI::PositiveNumber);
  gadget->add_option("--emit-trace", trace_path, "CSV trace over the joint cycle");

  auto* po2 = app.add_subcommand("po2", "Monte Carlo checks of the power-of-2 rounding");
  std::string check = "claim3";
  std::uint64_t trials = 0;
  po2->add_option("--check", check)->check(CLI::IsMember({"claim3", "claim4", "lemma10", "lemma12"}));
  po2->add_option("--epsilon", eps);
  po2->add_option("--trials", trials);
  po2->add_option("--seed", seed);
  po2->add_option("--out", out);

  auto* verify = app.add_subcommand("verify-all", "Run every claim check");
  verify->add_option("--seed", seed);
  verify->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) {
      emit(instance_to_json(generate_instance(parse_profile(profile), gen_n, seed)), out);
      return kOk;
    }
    if (*solve) {
      const auto inst = instance_from_json(read_json_file(instance_path));
      if (algorithm == "relax-exact" || algorithm == "relax-dp") {
        const auto sol = algorithm == "relax-exact" ? solve_relax_exact(inst, 2 * inst.capacity())
                                                    : solve_relax_dp(inst, 2 * inst.capacity(), eps);
        emit(relax_to_json(sol), out);
        return kOk;
      }
      if (algorithm == "classical2") {
        const auto res = classical_two_approx(inst);
        emit(policy_to_json(sosi_to_cyclic(res.sosi)), out);
        if (!report_path.empty())
          emit({{"certificate", certificate_to_json(res.certificate)},
                {"capacity_check", capacity_to_json(check_capacity_feasible(inst, res.certificate))},
                {"lower_bound", res.relaxation.objective},
                {"ratio", res.certificate.total_cost / res.relaxation.objective}},
               report_path);
        return check_capacity_feasible(inst, res.certificate).feasible ? kOk : kVerifyFailed;
      }
      Sub2Options opt;
      opt.tuning = preset == "paper" ? Tuning::paper(eps) : Tuning::desk(eps);
      opt.tuning.delta = delta;
      opt.seed = seed;
      opt.enumerate = enumerate;
      opt.prefix_solver = prefix_solver == "small-search" ? PrefixSolver::small_search : PrefixSolver::relax_halve;
      if (!benchmark_path.empty()) opt.benchmark = policy_from_json(read_json_file(benchmark_path));
      const auto rep = run_sub2(inst, opt);
      emit(policy_to_json(rep.final_policy), out);
      if (!report_path.empty()) emit(report_to_json(rep), report_path);
      return rep.capacity.feasible ? kOk : kVerifyFailed;
    }
    if (*eval) {
      const auto inst = instance_from_json(read_json_file(instance_path));
      const auto pol = policy_from_json(read_json_file(policy_path));
      EvalOptions eo;
      eo.sample_grid = grid;
      const auto cert = evaluate_policy(inst, pol, eo);
      emit({{"certificate", certificate_to_json(cert)}, {"capacity_check", capacity_to_json(check_capacity_feasible(inst, cert))}},
           out);
      if (!trace_path.empty()) {
        double horizon = 0;
        if (const auto h = hyperperiod(pol, eo.event_budget)) horizon = to_double(*h);
        if (horizon <= 0)
          for (const auto& [id, s] : pol.schedules) horizon = std::max(horizon, to_double(s.cycle));
        std::ofstream f(trace_path);
        if (!f) throw DomainError("cannot write " + trace_path);
        write_trace_csv(f, inst, pol, horizon, trace_samples);
      }
      return kOk;
    }
    if (*gadget) {
      if (gamma_b_opt->count()) gp.gamma_b = gamma_b;
      const auto [g, r] = run_gadget(case_id, k6, gp);
      if (!trace_path.empty()) {
        const Instance pair(1.0, {{g.a_id, gp.K_a, gp.H_a, gp.gamma_a},
                                  {g.b_id, gp.K_b, gp.H_b, gp.gamma_b ? *gp.gamma_b : gp.gamma_a * g.T_a / g.T_b}});
        std::ofstream f(trace_path);
        if (!f) throw DomainError("cannot write " + trace_path);
        write_trace_csv(f, pair, g.policy, to_double(g.policy.schedules.at(g.a_id).cycle), trace_samples);
      }
      std::cerr << "case " << case_id << ": claimed peak ratio " << to_string(r.claimed_peak_ratio) << ", measured "
                << to_string(r.measured_peak_ratio) << (r.passed() ? "" : "  [FAIL]") << '\n';
      emit(gadget_json(r), out);
      return r.passed() ? kOk : kVerifyFailed;
    }
    if (*po2) {
      CheckConfig cfg{eps, trials, seed, threads};
      const auto r = run_check(check, cfg);
      emit(check_json(r), out);
      return r.passed ? kOk : kVerifyFailed;
    }
    if (*verify) {
      bool all = true;
      Json checks = Json::array();
      for (int c = 1; c <= 6; ++c) {
        const auto r = run_gadget(c, 5).second;
        all = all && r.passed();
        checks.push_back(gadget_json(r));
        std::cerr << (r.passed() ? "PASS" : "FAIL") << " gadget case " << c << '\n';
      }
      CheckConfig cfg{0.3, 0, seed, threads};
      for (const char* name : {"claim3", "claim4", "lemma10", "lemma12"}) {
        const auto r = run_check(name, cfg);
        all = all && r.passed;
        checks.push_back(check_json(r));
        std::cerr << (r.passed ? "PASS" : "FAIL") << ' ' << name << '\n';
      }
      const auto r = classical_chain(seed, 100);
      all = all && r.passed;
      checks.push_back(check_json(r));
      std::cerr << (r.passed ? "PASS" : "FAIL") << " classical2\n";
      emit({{"passed", all}, {"checks", checks}}, out);
      return all ? kOk : kVerifyFailed;
    }
  } catch (const ScheduleInfeasible& e) {
    std::cerr << "error: commodity " << e.commodity() << ": " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kInputError;
  } catch (const MatchingInfeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kOk;
}
