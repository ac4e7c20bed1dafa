#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewls/model.hpp"
#include "ewls/rng.hpp"

namespace ewls {

struct Exponent {
  std::int32_t alpha = 0;
  double beta = 0;  // in [0, 1)
};

// T_hat = 2^(alpha + beta) T_min, with beta snapped to 0 within 1e-12 of an integer.
Exponent decompose(double T_hat, double T_min);

struct RoundedGroup {
  int q = 0;
  std::vector<int> members;
  std::vector<double> T_hat;
  double T_min = 0;
  std::vector<Exponent> exponents;
  double theta = 0;
  double base = 0;                    // 2^theta T_min
  std::vector<std::int32_t> shift;    // T_rounded = base * 2^shift
  std::vector<double> T_rounded;

  std::size_t index_of(int id) const;
};

RoundedGroup po2_round_group(const std::vector<int>& members, const std::vector<double>& T_hat, double theta, int q = 0);
RoundedGroup po2_round_group(const std::map<int, double>& T_hat, double theta, int q = 0);

int default_Q(double eps);           // ceil(20 ln(1/eps) / eps^2)
int min_group_size(double eps);      // ceil(2 / eps^2)

std::vector<std::vector<int>> partition_heavy(std::vector<int> heavy_ids, int Q, CounterRng& rng);

struct PairingResult {
  std::vector<std::pair<int, int>> near_pairs;  // (larger gamma T, smaller gamma T)
  std::vector<std::pair<int, int>> far_pairs;
  std::optional<int> leftover;
};

using GammaOf = std::function<double(int)>;

PairingResult pair_near_far(const RoundedGroup& group, const GammaOf& gamma, double eps);

struct EventA {
  bool holds = false;
  double lhs = 0;  // sum gamma T_rounded over heavy commodities
  double rhs = 0;  // (1+eps)/(sqrt2 ln2) * sum gamma T_hat
};

double po2_inflation();  // 1 / (sqrt 2 ln 2)
EventA check_event_A(const std::vector<RoundedGroup>& groups, const GammaOf& gamma, double eps);

enum class Branch { light_majority, heavy_event_A, heavy_fallback, ell_infinity };
const char* to_string(Branch b);

struct ClassInput {
  std::optional<int> ell;  // nullopt is the class at infinity
  double cap = 1;          // class cap on gamma * Ibar
  std::vector<int> members;
  std::map<int, double> T_hat;
};

struct ClassConfig {
  double eps = 0.3;
  int Q = 0;  // 0: default_Q(eps)
  double heavy_fraction = 0.75;
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;
  std::optional<std::vector<double>> forced_theta;  // one per group, for tests
  int max_gadget_k = 16;
  bool evaluate = true;
  EvalOptions eval{1024, 1'000'000, false};
};

struct ClassPolicyResult {
  CyclicPolicy policy;
  Branch branch = Branch::light_majority;
  PolicyCertificate certificate;
  double space_ratio = 0;   // peak upper / (|V| cap)
  double cost_ratio = 0;    // cost / sum C_EOQ(T_hat)
  double sosi_cost = 0;     // sum C_EOQ(T_hat)
  double space_bound = 0;   // (1+6eps)(7/4)/(sqrt2 ln2) |V| cap
  bool space_bound_ok = false;
  std::size_t heavy = 0, light = 0;
  std::size_t near_pairs = 0, far_pairs = 0, leftovers = 0, far_pair_cap_violations = 0;
  int Q_used = 0;
  EventA event;
  std::vector<std::string> flags;
};

// The class at infinity and the light-majority branch pass T_hat through; otherwise heavy commodities are
// rounded in Q groups, paired, and synchronized when the rounding total stays small.
ClassPolicyResult build_class_policy(const Instance& instance, const ClassInput& input, const ClassConfig& config);

// Monte Carlo checks of the rounding and per-class claims.
struct CheckReport {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> stats;
  std::string detail;
};

struct CheckConfig {
  double eps = 0.3;
  std::uint64_t trials = 0;  // 0: the check's default
  std::uint64_t seed = 1;
  int threads = 1;
};

CheckReport check_claim3(const CheckConfig& cfg);
CheckReport check_claim4(const CheckConfig& cfg);
CheckReport check_lemma10(const CheckConfig& cfg);
CheckReport check_lemma12(const CheckConfig& cfg, std::size_t class_size = 0);

// Heavy-band commodities: gamma T_hat uniform in (3/2, 2] cap, T_hat log-uniform.
struct HeavyBand {
  std::vector<Commodity> commodities;
  std::map<int, double> T_hat;
};
HeavyBand make_heavy_band(std::size_t n, double cap, CounterRng& rng, int first_id = 0);

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace ewls
