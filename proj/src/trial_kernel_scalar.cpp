#include "trial_kernel_impl.hpp"

namespace sptq::detail {

ClickHistogram run_trials_scalar(const TrialKernelParams& p, std::uint64_t first,
                                 std::uint64_t n) {
  return run_trials_impl<1>(p, first, n);
}

}  // namespace sptq::detail
