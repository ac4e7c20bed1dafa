#pragma once

#include <optional>

#include "ewls/model.hpp"

namespace ewls {

struct Sub1Couple {
  Commodity a;
  Commodity b;
  double T_a = 1;
  double T_b = 1;
  double eps = 0.05;
};

struct GadgetSchedule {
  int case_id = 0;
  int a_id = 0;  // the commodity with the longer interval
  int b_id = 0;
  double T_a = 0;
  double T_b = 0;
  CyclicPolicy policy;
  Rational claimed_peak_ratio;
  Rational claimed_cost_blowup;
  Rational claimed_order_rate_blowup;
  bool blowup_is_bound = false;
};

struct GadgetReport {
  int case_id = 0;
  Rational measured_peak_ratio;  // under gamma_A T_A = gamma_B T_B
  Rational claimed_peak_ratio;
  Rational peak_epoch;
  bool peak_ok = false;
  double actual_peak = 0;
  double actual_peak_bound = 0;  // (1+eps)(7/8)(gamma_A T_A + gamma_B T_B)
  bool actual_peak_ok = false;
  double cost_blowup_a = 0;
  double cost_blowup_b = 0;
  double claimed_cost_blowup = 0;
  bool blowup_ok = false;
  Rational order_rate_blowup_a;
  Rational order_rate_blowup_b;
  Rational claimed_order_rate_blowup;
  bool order_rate_ok = false;
  bool schedules_valid = false;
  std::string schedule_error;
  bool passed() const { return peak_ok && actual_peak_ok && blowup_ok && order_rate_ok && schedules_valid; }
};

// T_b <= T_a required; throws DomainError unless T_a / T_b is an exact power of 2.
int classify_case(double T_a, double T_b);
void validate_couple(const Sub1Couple& couple);
GadgetSchedule build_pair(const Sub1Couple& couple);
// Unit-normalized schedule of a case: T_A = 1, T_B = 2^-k (k taken from the case, or k_case6 for case 6).
GadgetSchedule build_case(int case_id, const Commodity& a, const Commodity& b, double T_a, int k_case6 = 5);
GadgetReport verify_gadget(const Commodity& a, const Commodity& b, const GadgetSchedule& g, double eps = 0.0,
                           double tol = 1e-9);

}  // namespace ewls
