#pragma once

// Width-generic body of the Monte Carlo trial kernel. Instantiated with
// W = 1 in the scalar TU and W = 4 in the AVX2 TU; both produce identical
// click masks per trial because every floating-point step is the same IEEE
// operation in each instantiation.

#include "sptq/simd/mathfun.hpp"
#include "sptq/simd/philox.hpp"
#include "sptq/trial_kernel.hpp"

namespace sptq::detail {

template <int W>
struct CtrMaker;

template <>
struct CtrMaker<1> {
  static simd::U32Pack<1> lo(std::uint64_t t) { return {static_cast<std::uint32_t>(t)}; }
  static simd::U32Pack<1> hi(std::uint64_t t) { return {static_cast<std::uint32_t>(t >> 32)}; }
};

#ifdef SPTQ_PACK_AVX2
template <>
struct CtrMaker<4> {
  static simd::U32Pack<4> lo(std::uint64_t t) {
    return {_mm_setr_epi32(static_cast<int>(static_cast<std::uint32_t>(t)),
                           static_cast<int>(static_cast<std::uint32_t>(t + 1)),
                           static_cast<int>(static_cast<std::uint32_t>(t + 2)),
                           static_cast<int>(static_cast<std::uint32_t>(t + 3)))};
  }
  static simd::U32Pack<4> hi(std::uint64_t t) {
    return {_mm_setr_epi32(static_cast<int>(static_cast<std::uint32_t>(t >> 32)),
                           static_cast<int>(static_cast<std::uint32_t>((t + 1) >> 32)),
                           static_cast<int>(static_cast<std::uint32_t>((t + 2) >> 32)),
                           static_cast<int>(static_cast<std::uint32_t>((t + 3) >> 32)))};
  }
};
#endif

template <int W>
inline void trial_group(const TrialKernelParams& p, std::uint64_t t, ClickHistogram& hist) {
  using P = simd::Pack<W>;
  const std::uint32_t k0 = static_cast<std::uint32_t>(p.seed);
  const std::uint32_t k1 = static_cast<std::uint32_t>(p.seed >> 32);

  const auto block = [&](std::uint32_t b, P& ua, P& ub) {
    const auto out =
        simd::philox4x32_10<W>(CtrMaker<W>::lo(t), CtrMaker<W>::hi(t),
                               simd::U32Pack<W>::broadcast(p.stream),
                               simd::U32Pack<W>::broadcast(b), k0, k1);
    simd::block_uniforms<W>(out, ua, ub);
  };

  P u_z1, u_z2, u_herald, u_port, u_eta, u_d0, u_d1, u_d2, u_d3, u_spare;
  block(0, u_z1, u_z2);
  block(1, u_herald, u_port);
  block(2, u_eta, u_d0);
  block(3, u_d1, u_d2);
  block(4, u_d3, u_spare);

  const P z = simd::box_muller<W>(u_z1, u_z2);
  const P phi = simd::fmadd(z, P::broadcast(p.phase_sigma), P::broadcast(p.phase_offset));
  P sphi, cphi;
  simd::sincos<W>(phi, sphi, cphi);

  const P zero = P::broadcast(0.0);
  const P one = P::broadcast(1.0);
  std::array<P, 4> prob{zero, zero, zero, zero};
  for (int i = 0; i < 4; ++i) {
    const P v = simd::fmadd(P::broadcast(p.coef_sin[i]), sphi,
                            simd::fmadd(P::broadcast(p.coef_cos[i]), cphi,
                                        P::broadcast(p.coef_const[i])));
    prob[i] = simd::max(v, zero);  // clamp rounding residue
  }
  const P cum1 = prob[0];
  const P cum2 = cum1 + prob[1];
  const P cum3 = cum2 + prob[2];
  const auto m1 = simd::cmp_ge(u_port, cum1);
  const auto m2 = simd::cmp_ge(u_port, cum2);
  const auto m3 = simd::cmp_ge(u_port, cum3);
  const P port_d = simd::select(m1, one, zero) + simd::select(m2, one, zero) +
                   simd::select(m3, one, zero);
  const P eta_sel = simd::select(
      m1,
      simd::select(m2, simd::select(m3, P::broadcast(p.eta[3]), P::broadcast(p.eta[2])),
                   P::broadcast(p.eta[1])),
      P::broadcast(p.eta[0]));

  const auto signal = simd::mask_and(simd::cmp_lt(u_herald, P::broadcast(p.herald_eff)),
                                     simd::cmp_lt(u_eta, eta_sel));
  const P pdark = P::broadcast(p.dark_click_prob);
  const unsigned sig_bits = simd::movemask(signal);
  const unsigned d0 = simd::movemask(simd::cmp_lt(u_d0, pdark));
  const unsigned d1 = simd::movemask(simd::cmp_lt(u_d1, pdark));
  const unsigned d2 = simd::movemask(simd::cmp_lt(u_d2, pdark));
  const unsigned d3 = simd::movemask(simd::cmp_lt(u_d3, pdark));

  double ports[W];
  port_d.store(ports);
  for (int lane = 0; lane < W; ++lane) {
    unsigned mask = ((d0 >> lane) & 1u) | (((d1 >> lane) & 1u) << 1) |
                    (((d2 >> lane) & 1u) << 2) | (((d3 >> lane) & 1u) << 3);
    if ((sig_bits >> lane) & 1u) mask |= 1u << static_cast<int>(ports[lane]);
    ++hist[mask];
  }
}

template <int W>
ClickHistogram run_trials_impl(const TrialKernelParams& p, std::uint64_t first,
                               std::uint64_t n) {
  ClickHistogram hist{};
  std::uint64_t t = first;
  const std::uint64_t end = first + n;
  for (; t + W <= end; t += W) trial_group<W>(p, t, hist);
  for (; t < end; ++t) trial_group<1>(p, t, hist);
  return hist;
}

}  // namespace sptq::detail
