/**
 * @file kernels.cpp
 * @brief Chunked compensated reductions with runtime backend dispatch.
 */
#include "torsionlab/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace torsionlab::kernels {

namespace detail {

double exp_chunk_scalar(const double* x, const double* w, std::size_t len,
                        double t) {
  KahanSum acc;
  if (w == nullptr) {
    for (std::size_t i = 0; i < len; ++i) acc.add(std::exp(-t * x[i]));
  } else {
    for (std::size_t i = 0; i < len; ++i) acc.add(w[i] * std::exp(-t * x[i]));
  }
  return acc.value();
}

}  // namespace detail

bool avx2_available() {
#if defined(TORSIONLAB_HAVE_AVX2) && defined(__GNUC__)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  const char* env = std::getenv("TORSIONLAB_KERNEL");
  const std::string mode = env ? env : "auto";
  if (mode == "scalar") return Backend::Scalar;
  if (mode == "avx2") {
    if (!avx2_available())
      throw std::runtime_error(
          "TORSIONLAB_KERNEL=avx2 requested but the AVX2 kernel is "
          "unavailable on this machine/build");
    return Backend::Avx2;
  }
  if (mode == "auto" || mode.empty())
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
  throw std::invalid_argument("unknown TORSIONLAB_KERNEL value '" + mode +
                              "' (expected scalar, avx2, or auto)");
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TORSIONLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

using ChunkFn = double (*)(const double*, const double*, std::size_t, double);

ChunkFn chunk_fn() {
#if defined(TORSIONLAB_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return &detail::exp_chunk_avx2;
#else
  (void)active_backend();  // still validates the environment variable
#endif
  return &detail::exp_chunk_scalar;
}

}  // namespace

double exp_weighted_sum(const double* x, const double* w, std::size_t len,
                        double t, int threads) {
  if (len == 0) return 0.0;
  const ChunkFn fn = chunk_fn();
  const std::size_t nchunks = (len + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);

  const auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t n = std::min(kChunk, len - lo);
    partial[c] = fn(x + lo, w ? w + lo : nullptr, n, t);
  };

  const int nthreads =
      static_cast<int>(std::min<std::size_t>(resolve_threads(threads), nchunks));
  if (nthreads <= 1 || nchunks == 1) {
    for (std::size_t c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    // Threads grab chunk indices from a shared counter; each chunk writes its
    // own slot, so the merge below is schedule-independent.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int k = 0; k < nthreads; ++k) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < nchunks;
             c = next.fetch_add(1))
          run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  KahanSum total;
  for (std::size_t c = 0; c < nchunks; ++c) total.add(partial[c]);
  return total.value();
}

double exp_sum(const double* x, std::size_t len, double t, int threads) {
  return exp_weighted_sum(x, nullptr, len, t, threads);
}

}  // namespace torsionlab::kernels
