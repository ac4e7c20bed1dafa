#pragma once

namespace ewls {

struct EoqParams {
  double K = 1;
  double H = 1;
};

struct CappedEoq {
  double T = 0;
  double cost = 0;
};

void validate(const EoqParams& p);
double eoq_cost(const EoqParams& p, double T);  // K/T + H T
double eoq_opt(const EoqParams& p);             // sqrt(K/H)
CappedEoq capped_eoq(const EoqParams& p, double cap);

}  // namespace ewls
