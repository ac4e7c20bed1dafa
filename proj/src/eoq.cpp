#include "ewls/eoq.hpp"

#include <algorithm>
#include <cmath>

#include "ewls/errors.hpp"

namespace ewls {

void validate(const EoqParams& p) {
  if (!(p.K > 0) || !(p.H > 0) || !std::isfinite(p.K) || !std::isfinite(p.H))
    throw DomainError("EOQ parameters must be positive");
}

double eoq_cost(const EoqParams& p, double T) {
  if (!(T > 0)) throw DomainError("order interval must be positive");
  return p.K / T + p.H * T;
}

double eoq_opt(const EoqParams& p) {
  validate(p);
  return std::sqrt(p.K / p.H);
}

CappedEoq capped_eoq(const EoqParams& p, double cap) {
  if (!(cap > 0)) throw DomainError("cap must be positive");
  const double T = std::min(eoq_opt(p), cap);
  return {T, eoq_cost(p, T)};
}

}  // namespace ewls
