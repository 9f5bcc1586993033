#include "sptq/trial_kernel.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sptq {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return detail::avx2_kernel_linked() && __builtin_cpu_supports("avx2") &&
         __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

ClickHistogram run_trials(const TrialKernelParams& p, std::uint64_t first,
                          std::uint64_t n, SimdMode mode) {
  switch (mode) {
    case SimdMode::Scalar:
      return detail::run_trials_scalar(p, first, n);
    case SimdMode::Avx2:
      if (!avx2_supported()) throw std::runtime_error("AVX2 kernel unavailable on this host");
      return detail::run_trials_avx2(p, first, n);
    case SimdMode::Auto:
      return avx2_supported() ? detail::run_trials_avx2(p, first, n)
                              : detail::run_trials_scalar(p, first, n);
  }
  return detail::run_trials_scalar(p, first, n);
}

ClickHistogram run_trials_threaded(const TrialKernelParams& p, std::uint64_t n,
                                   const ExecPolicy& policy) {
  const int threads = policy.threads > 1 ? policy.threads : 1;
  if (threads == 1) return run_trials(p, 0, n, policy.simd);

  // Fixed-size chunks keyed by trial index; the merge is commutative, so the
  // totals cannot depend on which worker ran which chunk.
  constexpr std::uint64_t kChunk = 8192;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> next{0};
  std::vector<ClickHistogram> partial(static_cast<std::size_t>(threads), ClickHistogram{});
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) break;
        const std::uint64_t first = c * kChunk;
        const std::uint64_t len = first + kChunk <= n ? kChunk : n - first;
        const ClickHistogram h = run_trials(p, first, len, policy.simd);
        for (int i = 0; i < 16; ++i) partial[static_cast<std::size_t>(w)][i] += h[i];
      }
    });
  }
  for (auto& t : pool) t.join();
  ClickHistogram total{};
  for (const auto& h : partial)
    for (int i = 0; i < 16; ++i) total[i] += h[i];
  return total;
}

}  // namespace sptq
