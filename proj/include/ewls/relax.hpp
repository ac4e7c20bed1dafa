#pragma once

#include <map>
#include <vector>

#include "ewls/eoq.hpp"
#include "ewls/model.hpp"

namespace ewls {

struct RelaxSolution {
  std::map<int, double> intervals;
  double objective = 0;
  double budget_used = 0;
  double budget = 0;
  double lambda = 0;
  double kkt_residual = 0;
};

// min sum C_i(T_i) s.t. sum gamma_i T_i <= budget, by bisection on the multiplier.
RelaxSolution solve_relax_exact(const std::vector<Commodity>& commodities, double budget);
RelaxSolution solve_relax_exact(const Instance& instance, double budget);

// Budget split into ceil(2n/eps) equal units; each commodity consumes a whole number of units.
RelaxSolution solve_relax_dp(const std::vector<Commodity>& commodities, double budget, double eps);
RelaxSolution solve_relax_dp(const Instance& instance, double budget, double eps);

struct ClassicalResult {
  SosiVector sosi;
  PolicyCertificate certificate;
  RelaxSolution relaxation;
};

ClassicalResult classical_two_approx(const Instance& instance, const EvalOptions& options = {});

bool is_zio(const CyclicSchedule& s);
// Equally spaced orders of size cycle/m, keeping the first order epoch.
CyclicSchedule sosify(const CyclicSchedule& s, const EoqParams& p);

}  // namespace ewls
