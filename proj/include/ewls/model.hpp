#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ewls/rational.hpp"

namespace ewls {

struct Commodity {
  int id = 0;
  double K = 1;      // setup cost per order
  double H = 1;      // holding rate is 2H per unit per unit time
  double gamma = 1;  // space per unit
};

class Instance {
 public:
  Instance() = default;
  Instance(double capacity, std::vector<Commodity> commodities);

  double capacity() const { return capacity_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  std::size_t size() const { return commodities_.size(); }
  const Commodity& by_id(int id) const;
  bool contains(int id) const { return index_.count(id) != 0; }

 private:
  double capacity_ = 1;
  std::vector<Commodity> commodities_;
  std::unordered_map<int, std::size_t> index_;
};

struct Order {
  Rational time;
  Rational quantity;
};

struct CyclicSchedule {
  Rational cycle;
  std::vector<Order> orders;  // sorted by time, times in [0, cycle)
  Rational i0;                // inventory just before time 0
};

struct CyclicPolicy {
  std::map<int, CyclicSchedule> schedules;
  // Optional grouping hints for the per-component peak bound; ids not listed are grouped by cycle length.
  std::vector<std::vector<int>> components;
};

struct SosiEntry {
  double T = 1;
  double phase = 0;
};
using SosiVector = std::map<int, SosiEntry>;

struct CommodityStats {
  double avg_inventory = 0;
  double long_run_cost = 0;
  double order_rate = 0;
  double peak_inventory = 0;
};

struct PolicyCertificate {
  std::map<int, CommodityStats> per_commodity;
  double total_cost = 0;
  std::optional<double> peak_space_exact;
  std::optional<Rational> peak_space_exact_q;
  std::optional<Rational> peak_epoch;
  double peak_space_upper = 0;
  double peak_space_sampled_lower = 0;
  double avg_space = 0;
  std::size_t component_count = 0;
};

struct EvalOptions {
  std::size_t sample_grid = 4096;
  std::uint64_t event_budget = 1'000'000;
  bool whole_policy_exact = true;
};

struct PeakResult {
  Rational peak;
  Rational epoch;
  std::uint64_t events = 0;
};

struct CapacityReport {
  bool feasible = false;
  bool exact = false;
  double peak = 0;
  double capacity = 0;
  std::optional<Rational> witness;
};

// Throws ScheduleInfeasible on mass-balance, periodicity, ordering or negativity violations.
void validate_schedule(int id, const CyclicSchedule& s);
void validate_policy(const Instance& instance, const CyclicPolicy& policy);

Rational inventory_integral(const CyclicSchedule& s);  // integral of I over one cycle
Rational inventory_at(const CyclicSchedule& s, const Rational& t);  // right limit at t
Rational peak_inventory(const CyclicSchedule& s);
CommodityStats schedule_stats(const Commodity& c, const CyclicSchedule& s);

std::optional<Rational> hyperperiod(const CyclicPolicy& policy, std::uint64_t event_budget);
std::optional<Rational> hyperperiod(const CyclicPolicy& policy, const std::vector<int>& ids, std::uint64_t event_budget);

// Exact maximum of sum gamma_i I_i(t) over the hyperperiod of the listed schedules.
std::optional<PeakResult> exact_peak(const Instance& instance, const CyclicPolicy& policy, const std::vector<int>& ids,
                                     std::uint64_t event_budget);

std::vector<std::vector<int>> resolve_components(const CyclicPolicy& policy);

PolicyCertificate evaluate_policy(const Instance& instance, const CyclicPolicy& policy, const EvalOptions& options = {});
CapacityReport check_capacity_feasible(const Instance& instance, const CyclicPolicy& policy, double tol = 1e-9,
                                       const EvalOptions& options = {});
CapacityReport check_capacity_feasible(const Instance& instance, const PolicyCertificate& cert, double tol = 1e-9);

// Sampled occupied space at the given probe times (SIMD kernels).
std::vector<double> sample_space(const Instance& instance, const CyclicPolicy& policy, const std::vector<double>& probes);

CyclicSchedule sosi_schedule(double T, double phase);
CyclicPolicy sosi_to_cyclic(const SosiVector& sosi);

// Multiplies every time, quantity, cycle length and I0 by factor.
CyclicSchedule scale_schedule(const CyclicSchedule& s, const Rational& factor);
CyclicPolicy scale_policy(const CyclicPolicy& policy, double factor);
CyclicPolicy scale_policy(const CyclicPolicy& policy, const Rational& factor);

// Union of disjoint policies; component hints are concatenated.
void merge_into(CyclicPolicy& into, const CyclicPolicy& part);

}  // namespace ewls
