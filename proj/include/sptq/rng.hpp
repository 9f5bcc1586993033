#pragma once

#include <cstdint>

#include "sptq/simd/philox.hpp"

namespace sptq {

/// Stream ids (the third counter word). Rows of a confusion run, grid points
/// of a sweep and QKD rounds get disjoint id ranges so a single run seed
/// never reuses a counter.
namespace streams {
inline constexpr std::uint32_t kConfusionRowBase = 0xC0000000u;
inline constexpr std::uint32_t kSweepPointBase = 0x50000000u;
inline constexpr std::uint32_t kQkd = 0x71000000u;
}  // namespace streams

/// Sequential view of the per-trial random numbers: uniforms come in pairs
/// from consecutive Philox blocks with counter (trial_lo, trial_hi, stream,
/// block). Consumers must draw in a fixed code order; the confusion kernel
/// consumes the same layout lane-parallel.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t trial)
      : k0_(static_cast<std::uint32_t>(seed)),
        k1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_(stream),
        trial_(trial) {}

  /// Uniform double in (0,1).
  double uniform() {
    if (has_pending_) {
      has_pending_ = false;
      return pending_;
    }
    const auto b = simd::philox4x32_10<1>({static_cast<std::uint32_t>(trial_)},
                                          {static_cast<std::uint32_t>(trial_ >> 32)},
                                          {stream_}, {block_++}, k0_, k1_);
    simd::Pack<1> first, second;
    simd::block_uniforms<1>(b, first, second);
    pending_ = second.v;
    has_pending_ = true;
    return first.v;
  }

  /// Standard normal deviate; consumes two uniforms.
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return simd::box_muller<1>({u1}, {u2}).v;
  }

 private:
  std::uint32_t k0_, k1_, stream_;
  std::uint64_t trial_;
  std::uint32_t block_ = 0;
  double pending_ = 0.0;
  bool has_pending_ = false;
};

}  // namespace sptq
