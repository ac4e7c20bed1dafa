#include "ewls/kernels.hpp"

#include <cmath>

namespace ewls::kernels {
namespace {

inline double combine(const double acc[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

inline std::size_t top_step(std::size_t m) {
  std::size_t step = 1;
  while (step * 2 <= m) step *= 2;
  return step;
}

void accumulate_space(const double* probes, double* out, std::size_t n, const StepView& s, double weight) {
  const std::size_t first = s.m ? top_step(s.m) : 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = probes[k];
    const double u = t - s.cycle * std::floor(t / s.cycle);
    std::size_t count = 0;
    for (std::size_t step = first; step > 0; step >>= 1) {
      if (count + step <= s.m && s.times[count + step - 1] <= u) count += step;
    }
    const double v = (s.i0 - u) + s.prefix[count];
    out[k] = out[k] + weight * v;
  }
}

double waterfill_sum(const double* K, const double* H, const double* g, std::size_t n, double lambda) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) acc[i % 4] += g[i] * std::sqrt(K[i] / (H[i] + lambda * g[i]));
  return combine(acc);
}

double po2_round(const double* beta, const std::int32_t* alpha, const double* gamma, double* out, std::size_t n,
                 double theta, double base) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t e = alpha[i] + (theta < beta[i] - 0.5 ? 1 : 0);
    out[i] = base * std::ldexp(1.0, e);
    acc[i % 4] += gamma[i] * out[i];
  }
  return combine(acc);
}

double eoq_cost_sum(const double* K, const double* H, const double* T, std::size_t n) {
  double acc[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) acc[i % 4] += K[i] / T[i] + H[i] * T[i];
  return combine(acc);
}

}  // namespace

const Table& scalar_table() {
  static const Table t{"scalar", accumulate_space, waterfill_sum, po2_round, eoq_cost_sum};
  return t;
}

}  // namespace ewls::kernels
