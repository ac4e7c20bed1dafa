#include "ewls/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace ewls::kernels {
namespace {

inline std::size_t top_step(std::size_t m) {
  std::size_t step = 1;
  while (step * 2 <= m) step *= 2;
  return step;
}

// Lanes hold partial sums for indices congruent mod 4; the tail folds into the same lanes.
inline double finish_tail(__m256d v, const double* terms, std::size_t from, std::size_t n) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  for (std::size_t i = from; i < n; ++i) lanes[i % 4] += terms[i - from];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void accumulate_space(const double* probes, double* out, std::size_t n, const StepView& s, double weight) {
  const std::size_t first = s.m ? top_step(s.m) : 0;
  const __m256d cyc = _mm256_set1_pd(s.cycle);
  const __m256d i0 = _mm256_set1_pd(s.i0);
  const __m256d w = _mm256_set1_pd(weight);
  const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(s.m) + 1);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d t = _mm256_loadu_pd(probes + k);
    const __m256d fl = _mm256_floor_pd(_mm256_div_pd(t, cyc));
    const __m256d u = _mm256_sub_pd(t, _mm256_mul_pd(cyc, fl));
    __m256i count = _mm256_setzero_si256();
    for (std::size_t step = first; step > 0; step >>= 1) {
      const __m256i st = _mm256_set1_epi64x(static_cast<long long>(step));
      const __m256i next = _mm256_add_epi64(count, st);
      // next <= m  <=>  m + 1 > next
      const __m256i in_range = _mm256_cmpgt_epi64(m1, next);
      const __m256i idx = _mm256_and_si256(_mm256_sub_epi64(next, _mm256_set1_epi64x(1)), in_range);
      const __m256d tv = _mm256_i64gather_pd(s.times, idx, 8);
      const __m256i le = _mm256_castpd_si256(_mm256_cmp_pd(tv, u, _CMP_LE_OQ));
      count = _mm256_add_epi64(count, _mm256_and_si256(st, _mm256_and_si256(le, in_range)));
    }
    const __m256d pre = _mm256_i64gather_pd(s.prefix, count, 8);
    const __m256d v = _mm256_add_pd(_mm256_sub_pd(i0, u), pre);
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(out + k), _mm256_mul_pd(w, v)));
  }
  for (; k < n; ++k) {
    const double t = probes[k];
    const double u = t - s.cycle * std::floor(t / s.cycle);
    std::size_t count = 0;
    for (std::size_t step = first; step > 0; step >>= 1) {
      if (count + step <= s.m && s.times[count + step - 1] <= u) count += step;
    }
    out[k] = out[k] + weight * ((s.i0 - u) + s.prefix[count]);
  }
}

double waterfill_sum(const double* K, const double* H, const double* g, std::size_t n, double lambda) {
  const __m256d lam = _mm256_set1_pd(lambda);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    const __m256d den = _mm256_add_pd(_mm256_loadu_pd(H + i), _mm256_mul_pd(lam, gv));
    const __m256d r = _mm256_sqrt_pd(_mm256_div_pd(_mm256_loadu_pd(K + i), den));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(gv, r));
  }
  double terms[4];
  for (std::size_t j = i; j < n; ++j) terms[j - i] = g[j] * std::sqrt(K[j] / (H[j] + lambda * g[j]));
  return finish_tail(acc, terms, i, n);
}

double po2_round(const double* beta, const std::int32_t* alpha, const double* gamma, double* out, std::size_t n,
                 double theta, double base) {
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d b = _mm256_set1_pd(base);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i one = _mm256_set1_epi64x(1);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d up = _mm256_cmp_pd(th, _mm256_sub_pd(_mm256_loadu_pd(beta + i), half), _CMP_LT_OQ);
    __m256i e = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(alpha + i)));
    e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(up), one));
    const __m256d p2 = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(e, bias), 52));
    const __m256d r = _mm256_mul_pd(b, p2);
    _mm256_storeu_pd(out + i, r);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(gamma + i), r));
  }
  double terms[4];
  for (std::size_t j = i; j < n; ++j) {
    const std::int32_t e = alpha[j] + (theta < beta[j] - 0.5 ? 1 : 0);
    out[j] = base * std::ldexp(1.0, e);
    terms[j - i] = gamma[j] * out[j];
  }
  return finish_tail(acc, terms, i, n);
}

double eoq_cost_sum(const double* K, const double* H, const double* T, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_loadu_pd(T + i);
    const __m256d c = _mm256_add_pd(_mm256_div_pd(_mm256_loadu_pd(K + i), t), _mm256_mul_pd(_mm256_loadu_pd(H + i), t));
    acc = _mm256_add_pd(acc, c);
  }
  double terms[4];
  for (std::size_t j = i; j < n; ++j) terms[j - i] = K[j] / T[j] + H[j] * T[j];
  return finish_tail(acc, terms, i, n);
}

}  // namespace

const Table* avx2_table() {
  static const Table t{"avx2", accumulate_space, waterfill_sum, po2_round, eoq_cost_sum};
  return &t;
}

}  // namespace ewls::kernels
