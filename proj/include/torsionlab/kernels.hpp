/**
 * @file kernels.hpp
 * @brief Deterministic compensated reductions for heat-trace mode sums.
 *
 * All spectral sums in the laboratory go through exp_weighted_sum, which
 * evaluates   sum_i w_i * exp(-t * x_i)   in fixed 4096-element chunks with
 * one compensated accumulator per chunk and an index-ordered merge.  Workers
 * may race over chunks, but the result is byte-identical for every thread
 * count because no floating-point operation depends on the schedule.
 *
 * Two chunk kernels are provided: a scalar reference and an AVX2+FMA variant
 * (Cephes-style rational exp approximation, compiled only on x86-64 with the
 * required compiler flags).  Selection happens at runtime: the environment
 * variable TORSIONLAB_KERNEL may force "scalar" or "avx2"; the default
 * ("auto") picks AVX2 when the CPU supports it.  The two kernels agree to a
 * relative 1e-14 on the test corpus (equivalence-tested), but are not
 * bit-identical to each other — determinism is a per-backend guarantee.
 */
#pragma once

#include <cstddef>
#include <string>

namespace torsionlab::kernels {

/// Classic compensated (Kahan) accumulator.  The volatile qualifiers pin the
/// rounding of the correction term so the compiler cannot reassociate the
/// cancellation away at -O2.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - cor_;
    const volatile double t = sum_ + y;
    const volatile double z = t - sum_;
    cor_ = z - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double cor_ = 0.0;
};

enum class Backend { Scalar, Avx2 };

/// True when the AVX2 kernel is both compiled in and supported by this CPU.
bool avx2_available();

/// Resolve TORSIONLAB_KERNEL (scalar | avx2 | auto); throws on an unknown
/// value or on a forced backend that is unavailable.
Backend active_backend();

const char* backend_name(Backend b);

/// Number of worker threads: `requested` if positive, else TORSIONLAB_THREADS,
/// else the hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Deterministic  sum_i w[i] * exp(-t * x[i])  (w may be nullptr for w == 1).
double exp_weighted_sum(const double* x, const double* w, std::size_t len,
                        double t, int threads = 1);

/// Convenience: deterministic  sum_i exp(-t * x[i]).
double exp_sum(const double* x, std::size_t len, double t, int threads = 1);

namespace detail {
/// Single-chunk kernels (len <= 4096); exposed for equivalence tests.
double exp_chunk_scalar(const double* x, const double* w, std::size_t len,
                        double t);
#if defined(TORSIONLAB_HAVE_AVX2)
double exp_chunk_avx2(const double* x, const double* w, std::size_t len,
                      double t);
#endif
}  // namespace detail

inline constexpr std::size_t kChunk = 4096;

}  // namespace torsionlab::kernels
