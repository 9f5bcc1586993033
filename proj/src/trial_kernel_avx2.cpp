// Compiled with -mavx2 -mfma on x86-64; elsewhere it degrades to a stub and
// dispatch keeps everything on the scalar kernel.

#include "trial_kernel_impl.hpp"

#include <stdexcept>

namespace sptq::detail {

#ifdef SPTQ_PACK_AVX2

ClickHistogram run_trials_avx2(const TrialKernelParams& p, std::uint64_t first,
                               std::uint64_t n) {
  return run_trials_impl<4>(p, first, n);
}

bool avx2_kernel_linked() { return true; }

#else

ClickHistogram run_trials_avx2(const TrialKernelParams&, std::uint64_t, std::uint64_t) {
  throw std::runtime_error("AVX2 kernel not built on this architecture");
}

bool avx2_kernel_linked() { return false; }

#endif

}  // namespace sptq::detail
