#pragma once

#include <cstddef>
#include <cstdint>

namespace ewls::kernels {

// Piecewise-linear periodic inventory in double precision.
// prefix has m+1 entries: prefix[0] = 0, prefix[j+1] = q_0 + ... + q_j.
struct StepView {
  double cycle;
  double i0;
  const double* times;
  const double* prefix;
  std::size_t m;
};

struct Table {
  const char* name;
  // out[k] += weight * I(probes[k])
  void (*accumulate_space)(const double* probes, double* out, std::size_t n, const StepView& s, double weight);
  // sum_i gamma_i * sqrt(K_i / (H_i + lambda * gamma_i))
  double (*waterfill_sum)(const double* K, const double* H, const double* gamma, std::size_t n, double lambda);
  // out_i = base * 2^(alpha_i + [theta < beta_i - 1/2]); returns sum_i gamma_i * out_i
  double (*po2_round)(const double* beta, const std::int32_t* alpha, const double* gamma, double* out,
                      std::size_t n, double theta, double base);
  // sum_i K_i / T_i + H_i * T_i
  double (*eoq_cost_sum)(const double* K, const double* H, const double* T, std::size_t n);
};

enum class Isa { scalar, avx2 };

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in

bool cpu_has_avx2();
// AVX2 when the CPU supports it, unless EWLS_FORCE_SCALAR is set to a non-empty value other than "0".
const Table& active();
const Table& table_for(Isa isa);

}  // namespace ewls::kernels
