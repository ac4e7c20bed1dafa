#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ewls/bmatching.hpp"
#include "ewls/model.hpp"
#include "ewls/po2sync.hpp"
#include "ewls/relax.hpp"

namespace ewls {

inline constexpr int kEllInfinity = 1 << 30;  // class index of the class at infinity

struct Tuning {
  double eps = 0.3;
  double delta = 17.0 / 10000.0;
  double sparse_threshold = 0;  // 0: paper formula 100 ln(1/eps) / eps^4
  int Q = 0;                    // 0: default_Q(eps)
  double heavy_fraction = 0.75;

  static Tuning paper(double eps);
  // Sparse threshold Q * ceil(2/eps^2), so a dense heavy-majority class can meet the group-size premise.
  static Tuning desk(double eps);
  double threshold() const;
};

double paper_sparse_threshold(double eps);
int class_count_L(std::size_t n, double eps);  // ceil(log_{1+eps}(n / eps))
int prefix_span_Delta(double eps);             // ceil(log_{1+eps}(125 / eps^7))

enum class ClassType { prefix, suffix, dense };

struct VolumeClassification {
  double eps = 0;
  double capacity = 0;
  std::size_t n = 0;
  int L = 0;
  int Delta = 0;
  double sparse_threshold = 0;
  std::map<int, int> class_of;
  std::map<int, std::vector<int>> members;  // nonempty classes only
  std::set<int> sparse, dense;
  std::vector<int> prefix, suffix;
  std::map<int, double> class_volume;  // V-bar
  std::map<int, double> overestimate;  // V-tilde
  std::map<int, double> N_tilde;
  double V_S = 0, V_D = 0, V_prefix = 0, V_suffix = 0;
  double V_tilde_D = 0;
  std::map<int, double> avg_inventory;   // benchmark Ibar
  std::map<int, double> benchmark_cost;  // benchmark per-commodity cost
  std::vector<std::string> warnings;

  double class_cap(int ell) const;  // cap on gamma * Ibar for class ell
  std::vector<int> commodities_of(const std::vector<int>& classes) const;
};

VolumeClassification classify_volumes(const Instance& instance, const CyclicPolicy& benchmark, const Tuning& tuning,
                                      const EvalOptions& eval = {});
VolumeClassification classify_volumes(const Instance& instance, const PolicyCertificate& benchmark, const Tuning& tuning);

// Re-labels nonempty classes by the given types and recomputes aggregates; V_tilde_D is set by the caller.
void apply_types(VolumeClassification& cls, const std::map<int, ClassType>& types);

struct MimickingResult {
  std::map<int, std::vector<int>> partition;
  std::map<int, double> T_hat;
  MatchingProblem problem;
  double matched_weight = 0;
  double identity_weight = 0;  // every commodity kept in its benchmark class
  double benchmark_cost = 0;   // benchmark cost restricted to the matched commodities
  bool lemma6_ok = false;
  bool certified = false;
  std::vector<std::string> flags;
};

double interval_cap(const VolumeClassification& cls, int ell, double gamma);
MimickingResult mimicking_partition(const Instance& instance, const VolumeClassification& cls, const Tuning& tuning);

struct ClassSummary {
  int ell = 0;
  std::size_t size = 0;
  std::string kind;  // suffix or the dense branch name
  std::size_t heavy = 0, light = 0, near_pairs = 0, far_pairs = 0;
  double space_ratio = 0, cost_ratio = 0;
  double space_bound_ratio = 0;
  bool space_bound_ok = true;
  double event_lhs = 0, event_rhs = 0;
  int Q_used = 0;
  std::vector<std::string> flags;
};

struct SuffixDenseResult {
  CyclicPolicy policy;
  PolicyCertificate certificate;
  std::vector<ClassSummary> classes;
  double suffix_peak = 0;
  double suffix_bound = 0;  // 4 eps V
  double dense_bound = 0;   // (1+8eps)(7/4)/(sqrt2 ln2) V_D + 10 eps V
  std::vector<std::string> flags;
};

SuffixDenseResult build_suffix_dense_policy(const Instance& instance, const VolumeClassification& cls,
                                            const MimickingResult& mimic, const Tuning& tuning, std::uint64_t seed,
                                            const EvalOptions& eval = {});

enum class Scenario { easy_sparse, difficult_lowD, difficult_dense };
const char* to_string(Scenario s);
Scenario choose_scenario(const VolumeClassification& cls, double delta);

enum class PrefixSolver { relax_halve, small_search };

struct Sub2Options {
  Tuning tuning;
  std::optional<CyclicPolicy> benchmark;
  std::uint64_t seed = 1;
  PrefixSolver prefix_solver = PrefixSolver::relax_halve;
  bool enumerate = false;
  std::uint64_t enumerate_cap = 1'000'000;
  EvalOptions eval{2048, 1'000'000, true};
};

struct EnumerationSummary {
  std::uint64_t predicted = 0;
  std::uint64_t tried = 0;
  std::uint64_t feasible = 0;
  double best_cost = 0;
  double oracle_cost = 0;
  bool oracle_guess_enumerated = false;
};

struct PipelineReport {
  Scenario scenario = Scenario::difficult_lowD;
  std::string benchmark_source;
  VolumeClassification classification;
  CyclicPolicy final_policy;
  PolicyCertificate final_certificate;
  CapacityReport capacity;
  double lower_bound = 0;
  double ratio_vs_lower_bound = 0;
  double analytic_factor = 0;
  double measured_factor = 0;
  double applied_factor = 0;
  double pre_scale_peak = 0;
  bool pre_scale_peak_exact = false;
  double pre_scale_cost = 0;
  std::vector<ClassSummary> classes;
  std::optional<MimickingResult> mimic;
  double suffix_peak = 0, suffix_bound = 0, dense_bound = 0, suffix_dense_peak = 0;
  std::vector<std::string> guarantee_flags;
  std::optional<EnumerationSummary> enumeration;
};

PipelineReport run_sub2(const Instance& instance, const Sub2Options& options);

// Smallest-cost capacity-feasible SOSI found by a discretized power-of-2 search with phases (at most 3
// commodities), never worse than the halved relaxation.
SosiVector small_instance_search(const std::vector<Commodity>& commodities, double capacity);

}  // namespace ewls
