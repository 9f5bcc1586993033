#pragma once

// Width-generic log / sincos / Box-Muller built only from the pack ops, so
// the scalar and vector instantiations agree bit-for-bit lane by lane.
// Accuracy is a few ulp over the ranges the kernels use, which is far below
// the statistical resolution of any simulated quantity.

#include "sptq/simd/pack.hpp"

namespace sptq::simd {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kTwoOverPi = 0.63661977236758134308;
// Cody-Waite split of pi/2: hi has 33 significant bits, so k*hi is exact for
// the |k| < 2^19 this code ever sees.
inline constexpr double kPio2Hi = 1.57079632673412561417e+00;
inline constexpr double kPio2Lo = 6.07710050650619224932e-11;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
// 1.5 * 2^52: adding it rounds to the nearest integer and leaves that
// integer (mod 2^52, two's complement) in the mantissa bits.
inline constexpr double kRoundMagic = 6755399441055744.0;

/// Uniform double in (0,1) with 52-bit resolution from 64 random bits.
template <int W>
inline Pack<W> unit_double(UPack<W> bits) {
  const UPack<W> mant = shr<12>(bits);
  const UPack<W> expo = UPack<W>::broadcast(0x4330000000000000ull);  // 2^52
  const Pack<W> d = from_bits(mant | expo) - Pack<W>::broadcast(0x1p52);
  return fmadd(d, Pack<W>::broadcast(0x1p-52), Pack<W>::broadcast(0x1p-53));
}

/// Natural log for x in (0, 1]; also fine for any positive normal x.
template <int W>
inline Pack<W> log_pos(Pack<W> x) {
  using P = Pack<W>;
  using U = UPack<W>;
  const U bits = to_bits(x);
  const U ebits = shr<52>(bits);
  // remap mantissa into [0.5, 1), then fold into [sqrt(1/2), sqrt(2))
  const U mant =
      (bits & U::broadcast(0x000FFFFFFFFFFFFFull)) | U::broadcast(0x3FE0000000000000ull);
  P m = from_bits(mant);
  P e = from_bits(ebits | U::broadcast(0x4330000000000000ull)) - P::broadcast(0x1p52);
  e = e - P::broadcast(1022.0);
  const Mask<W> low = cmp_lt(m, P::broadcast(0.70710678118654752440));
  m = select(low, m + m, m);
  e = select(low, e - P::broadcast(1.0), e);

  const P one = P::broadcast(1.0);
  const P s = (m - one) / (m + one);
  const P z = s * s;
  // atanh(s)/s as an odd series in s, |s| <= sqrt2-1 over the folded range
  P p = P::broadcast(1.0 / 19.0);
  p = fmadd(p, z, P::broadcast(1.0 / 17.0));
  p = fmadd(p, z, P::broadcast(1.0 / 15.0));
  p = fmadd(p, z, P::broadcast(1.0 / 13.0));
  p = fmadd(p, z, P::broadcast(1.0 / 11.0));
  p = fmadd(p, z, P::broadcast(1.0 / 9.0));
  p = fmadd(p, z, P::broadcast(1.0 / 7.0));
  p = fmadd(p, z, P::broadcast(1.0 / 5.0));
  p = fmadd(p, z, P::broadcast(1.0 / 3.0));
  p = fmadd(p, z, one);
  const P t = (s + s) * p;
  P r = fmadd(e, P::broadcast(kLn2Lo), t);
  r = fmadd(e, P::broadcast(kLn2Hi), r);
  return r;
}

/// sin and cos for |x| up to ~1e6 rad (Cody-Waite two-term reduction).
template <int W>
inline void sincos(Pack<W> x, Pack<W>& sin_out, Pack<W>& cos_out) {
  using P = Pack<W>;
  using U = UPack<W>;
  const P magic = P::broadcast(kRoundMagic);
  const P kd = fmadd(x, P::broadcast(kTwoOverPi), magic);
  const U q = to_bits(kd);  // low two bits = quadrant
  const P k = kd - magic;
  P r = fmadd(k, P::broadcast(-kPio2Hi), x);
  r = fmadd(k, P::broadcast(-kPio2Lo), r);
  const P z = r * r;

  // Taylor series on |r| <= pi/4: sin to r^15, cos to r^16
  P ps = P::broadcast(-1.0 / 1307674368000.0);
  ps = fmadd(ps, z, P::broadcast(1.0 / 6227020800.0));
  ps = fmadd(ps, z, P::broadcast(-1.0 / 39916800.0));
  ps = fmadd(ps, z, P::broadcast(1.0 / 362880.0));
  ps = fmadd(ps, z, P::broadcast(-1.0 / 5040.0));
  ps = fmadd(ps, z, P::broadcast(1.0 / 120.0));
  ps = fmadd(ps, z, P::broadcast(-1.0 / 6.0));
  ps = fmadd(ps, z, P::broadcast(1.0));
  ps = ps * r;

  P pc = P::broadcast(1.0 / 20922789888000.0);
  pc = fmadd(pc, z, P::broadcast(-1.0 / 87178291200.0));
  pc = fmadd(pc, z, P::broadcast(1.0 / 479001600.0));
  pc = fmadd(pc, z, P::broadcast(-1.0 / 3628800.0));
  pc = fmadd(pc, z, P::broadcast(1.0 / 40320.0));
  pc = fmadd(pc, z, P::broadcast(-1.0 / 720.0));
  pc = fmadd(pc, z, P::broadcast(1.0 / 24.0));
  pc = fmadd(pc, z, P::broadcast(-0.5));
  pc = fmadd(pc, z, P::broadcast(1.0));

  const Mask<W> swap = nonzero(q & U::broadcast(1));
  const P s0 = select(swap, pc, ps);
  const P c0 = select(swap, ps, pc);
  const Mask<W> flip_s = nonzero(q & U::broadcast(2));
  const Mask<W> flip_c = nonzero((q + U::broadcast(1)) & U::broadcast(2));
  sin_out = select(flip_s, neg(s0), s0);
  cos_out = select(flip_c, neg(c0), c0);
}

/// Standard normal deviate from two (0,1) uniforms: sqrt(-2 ln u1) cos(2pi u2).
template <int W>
inline Pack<W> box_muller(Pack<W> u1, Pack<W> u2) {
  using P = Pack<W>;
  const P radius = sqrt(P::broadcast(-2.0) * log_pos(u1));
  P s, c;
  sincos(u2 * P::broadcast(kTwoPi), s, c);
  return radius * c;
}

}  // namespace sptq::simd
