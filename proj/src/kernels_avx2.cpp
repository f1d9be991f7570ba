/**
 * @file kernels_avx2.cpp
 * @brief AVX2+FMA chunk kernel: vectorized exp with per-lane compensation.
 *
 * exp(x) follows the classic Cephes rational scheme: write x = n*log(2) + r
 * with |r| <= log(2)/2 via Cody-Waite two-constant reduction, evaluate
 *   exp(r) = 1 + 2 * r*P(r^2) / (Q(r^2) - r*P(r^2)),
 * and scale by 2^n through direct exponent-bit insertion.  Inputs below
 * -708.39 flush to zero (the scalar reference returns a subnormal there; the
 * difference is ~1e-308 per term and invisible at the 1e-14 equivalence
 * tolerance).  Accumulation is Kahan-compensated per SIMD lane, and the four
 * lane totals merge in lane order, so the chunk result is deterministic.
 */
#include "torsionlab/kernels.hpp"

#if defined(TORSIONLAB_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace torsionlab::kernels::detail {

namespace {

inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d lo = _mm256_set1_pd(-708.39);
  const __m256d hi = _mm256_set1_pd(709.43);

  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  // n = floor(x * log2(e) + 0.5)
  const __m256d n = _mm256_floor_pd(
      _mm256_fmadd_pd(x, log2e, _mm256_set1_pd(0.5)));
  // r = x - n*C1 - n*C2   (Cody-Waite)
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  // px = r * P(r^2)
  __m256d px = _mm256_fmadd_pd(p0, r2, p1);
  px = _mm256_fmadd_pd(px, r2, p2);
  px = _mm256_mul_pd(px, r);
  // qx = Q(r^2)
  __m256d qx = _mm256_fmadd_pd(q0, r2, q1);
  qx = _mm256_fmadd_pd(qx, r2, q2);
  qx = _mm256_fmadd_pd(qx, r2, q3);

  const __m256d frac = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  __m256d e = _mm256_fmadd_pd(frac, _mm256_set1_pd(2.0),
                              _mm256_set1_pd(1.0));

  // Multiply by 2^n: build the scale factor via exponent-bit insertion.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits = _mm256_slli_epi64(
      _mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));

  return _mm256_andnot_pd(underflow, e);
}

}  // namespace

double exp_chunk_avx2(const double* x, const double* w, std::size_t len,
                      double t) {
  const __m256d mt = _mm256_set1_pd(-t);
  __m256d sum = _mm256_setzero_pd();
  __m256d cor = _mm256_setzero_pd();

  const std::size_t vlen = len - (len % 4);
  for (std::size_t i = 0; i < vlen; i += 4) {
    __m256d term = exp_pd(_mm256_mul_pd(mt, _mm256_loadu_pd(x + i)));
    if (w != nullptr) term = _mm256_mul_pd(term, _mm256_loadu_pd(w + i));
    // Per-lane Kahan step (intrinsics are not reassociated by the compiler).
    const __m256d y = _mm256_sub_pd(term, cor);
    const __m256d s = _mm256_add_pd(sum, y);
    cor = _mm256_sub_pd(_mm256_sub_pd(s, sum), y);
    sum = s;
  }

  alignas(32) double lane_sum[4];
  alignas(32) double lane_cor[4];
  _mm256_store_pd(lane_sum, sum);
  _mm256_store_pd(lane_cor, cor);

  KahanSum acc;
  for (int lane = 0; lane < 4; ++lane) acc.add(lane_sum[lane] - lane_cor[lane]);
  for (std::size_t i = vlen; i < len; ++i) {
    const double term = std::exp(-t * x[i]);
    acc.add(w ? w[i] * term : term);
  }
  return acc.value();
}

}  // namespace torsionlab::kernels::detail

#endif  // TORSIONLAB_HAVE_AVX2
