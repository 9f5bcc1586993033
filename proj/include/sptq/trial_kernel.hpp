#pragma once

#include <array>
#include <cstdint>

namespace sptq {

enum class SimdMode { Auto, Scalar, Avx2 };

struct ExecPolicy {
  SimdMode simd = SimdMode::Auto;
  int threads = 1;
};

/// Histogram over the 16 click patterns of one gate; index = bitmask with
/// bit i set when the detector on port i fired.
using ClickHistogram = std::array<std::uint64_t, 16>;

/// Inputs of the fused channel+analyzer+detection kernel. The port
/// probabilities as a function of the path-a phase are
///   p_i(phi) = coef_const[i] + coef_cos[i] cos(phi) + coef_sin[i] sin(phi),
/// phi = phase_offset + phase_sigma * z with z a per-trial standard normal.
///
/// Per-trial draw layout (Philox blocks, two uniforms each):
///   block 0: z pair | block 1: herald, port | block 2: eta, dark0
///   block 3: dark1, dark2 | block 4: dark3, unused
struct TrialKernelParams {
  std::array<double, 4> coef_const{};
  std::array<double, 4> coef_cos{};
  std::array<double, 4> coef_sin{};
  double phase_offset = 0.0;
  double phase_sigma = 0.0;
  double herald_eff = 1.0;
  std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};
  double dark_click_prob = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

/// True when the AVX2+FMA kernel is compiled in and the CPU supports it.
bool avx2_supported();

/// Runs trials [first, first+n) through one kernel. Throws
/// std::runtime_error if mode == Avx2 on a host without AVX2.
ClickHistogram run_trials(const TrialKernelParams& p, std::uint64_t first_trial,
                          std::uint64_t n_trials, SimdMode mode);

/// Same totals for any thread count: counters depend only on the trial
/// index and histogram merging is commutative integer addition.
ClickHistogram run_trials_threaded(const TrialKernelParams& p, std::uint64_t n_trials,
                                   const ExecPolicy& policy);

namespace detail {
ClickHistogram run_trials_scalar(const TrialKernelParams& p, std::uint64_t first,
                                 std::uint64_t n);
ClickHistogram run_trials_avx2(const TrialKernelParams& p, std::uint64_t first,
                               std::uint64_t n);
bool avx2_kernel_linked();
}  // namespace detail

}  // namespace sptq
