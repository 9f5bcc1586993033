#pragma once

// Philox4x32-10 counter-based generator, width-generic over the pack lanes.
// One invocation turns a (counter, key) pair into 128 random bits per lane;
// distinct counters give independent streams, which is what makes per-trial
// seeding (run seed, stream, trial index, block index) reproducible under
// any parallel schedule.

#include "sptq/simd/mathfun.hpp"
#include "sptq/simd/pack.hpp"

namespace sptq::simd {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

template <int W>
struct PhiloxBlock {
  U32Pack<W> x0, x1, x2, x3;
};

template <int W>
inline PhiloxBlock<W> philox4x32_10(U32Pack<W> c0, U32Pack<W> c1, U32Pack<W> c2,
                                    U32Pack<W> c3, std::uint32_t k0, std::uint32_t k1) {
  for (int round = 0; round < 10; ++round) {
    const U32Pack<W> hi0 = mulhi32(c0, kPhiloxM0);
    const U32Pack<W> lo0 = mullo32(c0, kPhiloxM0);
    const U32Pack<W> hi1 = mulhi32(c2, kPhiloxM1);
    const U32Pack<W> lo1 = mullo32(c2, kPhiloxM1);
    const U32Pack<W> n0 = hi1 ^ c1 ^ U32Pack<W>::broadcast(k0);
    const U32Pack<W> n2 = hi0 ^ c3 ^ U32Pack<W>::broadcast(k1);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {c0, c1, c2, c3};
}

/// Two (0,1) doubles per block: words (x1:x0) and (x3:x2).
template <int W>
inline void block_uniforms(const PhiloxBlock<W>& b, Pack<W>& u_first, Pack<W>& u_second) {
  u_first = unit_double<W>(widen_u64(b.x1, b.x0));
  u_second = unit_double<W>(widen_u64(b.x3, b.x2));
}

}  // namespace sptq::simd
