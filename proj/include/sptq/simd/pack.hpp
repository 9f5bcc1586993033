#pragma once

// Width-generic lane types for the Monte Carlo kernels. The W=1 forms are the
// scalar reference; the W=4 forms map onto AVX2/FMA. Every operation here is
// a single IEEE-754 operation (or an exact bit manipulation) so that a lane
// of the vector kernel is bit-identical to the scalar kernel for the same
// inputs. Keep it that way: no approximate reciprocals, no implicit
// contraction (the build sets -ffp-contract=off), fused ops only via fmadd().

#include <bit>
#include <cmath>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define SPTQ_PACK_AVX2 1
#endif

namespace sptq::simd {

template <int W> struct Pack;
template <int W> struct UPack;
template <int W> struct U32Pack;
template <int W> struct Mask;

// ---------------------------------------------------------------------------
// W = 1: scalar reference lanes
// ---------------------------------------------------------------------------

template <> struct Mask<1> {
  bool v;
};

template <> struct Pack<1> {
  double v;
  static constexpr int width = 1;
  static Pack broadcast(double x) { return {x}; }
  void store(double* out) const { out[0] = v; }
  friend Pack operator+(Pack a, Pack b) { return {a.v + b.v}; }
  friend Pack operator-(Pack a, Pack b) { return {a.v - b.v}; }
  friend Pack operator*(Pack a, Pack b) { return {a.v * b.v}; }
  friend Pack operator/(Pack a, Pack b) { return {a.v / b.v}; }
};

template <> struct UPack<1> {
  std::uint64_t v;
  static UPack broadcast(std::uint64_t x) { return {x}; }
  friend UPack operator&(UPack a, UPack b) { return {a.v & b.v}; }
  friend UPack operator|(UPack a, UPack b) { return {a.v | b.v}; }
  friend UPack operator^(UPack a, UPack b) { return {a.v ^ b.v}; }
  friend UPack operator+(UPack a, UPack b) { return {a.v + b.v}; }
};

template <> struct U32Pack<1> {
  std::uint32_t v;
  static U32Pack broadcast(std::uint32_t x) { return {x}; }
  friend U32Pack operator^(U32Pack a, U32Pack b) { return {a.v ^ b.v}; }
};

inline Pack<1> fmadd(Pack<1> a, Pack<1> b, Pack<1> c) { return {std::fma(a.v, b.v, c.v)}; }
inline Pack<1> sqrt(Pack<1> a) { return {std::sqrt(a.v)}; }
// matches vmaxpd semantics for finite inputs
inline Pack<1> max(Pack<1> a, Pack<1> b) { return {a.v < b.v ? b.v : a.v}; }
inline Pack<1> neg(Pack<1> a) {
  return {std::bit_cast<double>(std::bit_cast<std::uint64_t>(a.v) ^ 0x8000000000000000ull)};
}
inline Mask<1> cmp_lt(Pack<1> a, Pack<1> b) { return {a.v < b.v}; }
inline Mask<1> cmp_ge(Pack<1> a, Pack<1> b) { return {a.v >= b.v}; }
inline Mask<1> mask_and(Mask<1> a, Mask<1> b) { return {a.v && b.v}; }
inline Pack<1> select(Mask<1> m, Pack<1> a, Pack<1> b) { return m.v ? a : b; }
inline UPack<1> to_bits(Pack<1> a) { return {std::bit_cast<std::uint64_t>(a.v)}; }
inline Pack<1> from_bits(UPack<1> a) { return {std::bit_cast<double>(a.v)}; }
template <int K> UPack<1> shr(UPack<1> a) { return {a.v >> K}; }
inline Mask<1> nonzero(UPack<1> a) { return {a.v != 0}; }
inline unsigned movemask(Mask<1> m) { return m.v ? 1u : 0u; }

inline U32Pack<1> mullo32(U32Pack<1> a, std::uint32_t b) { return {a.v * b}; }
inline U32Pack<1> mulhi32(U32Pack<1> a, std::uint32_t b) {
  return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.v) * b) >> 32)};
}
inline UPack<1> widen_u64(U32Pack<1> hi, U32Pack<1> lo) {
  return {(static_cast<std::uint64_t>(hi.v) << 32) | lo.v};
}

// ---------------------------------------------------------------------------
// W = 4: AVX2 + FMA lanes (only in translation units built with those ISAs)
// ---------------------------------------------------------------------------

#ifdef SPTQ_PACK_AVX2

template <> struct Mask<4> {
  __m256d v;
};

template <> struct Pack<4> {
  __m256d v;
  static constexpr int width = 4;
  static Pack broadcast(double x) { return {_mm256_set1_pd(x)}; }
  void store(double* out) const { _mm256_storeu_pd(out, v); }
  friend Pack operator+(Pack a, Pack b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend Pack operator-(Pack a, Pack b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend Pack operator*(Pack a, Pack b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend Pack operator/(Pack a, Pack b) { return {_mm256_div_pd(a.v, b.v)}; }
};

template <> struct UPack<4> {
  __m256i v;
  static UPack broadcast(std::uint64_t x) {
    return {_mm256_set1_epi64x(static_cast<long long>(x))};
  }
  friend UPack operator&(UPack a, UPack b) { return {_mm256_and_si256(a.v, b.v)}; }
  friend UPack operator|(UPack a, UPack b) { return {_mm256_or_si256(a.v, b.v)}; }
  friend UPack operator^(UPack a, UPack b) { return {_mm256_xor_si256(a.v, b.v)}; }
  friend UPack operator+(UPack a, UPack b) { return {_mm256_add_epi64(a.v, b.v)}; }
};

template <> struct U32Pack<4> {
  __m128i v;
  static U32Pack broadcast(std::uint32_t x) { return {_mm_set1_epi32(static_cast<int>(x))}; }
  friend U32Pack operator^(U32Pack a, U32Pack b) { return {_mm_xor_si128(a.v, b.v)}; }
};

inline Pack<4> fmadd(Pack<4> a, Pack<4> b, Pack<4> c) { return {_mm256_fmadd_pd(a.v, b.v, c.v)}; }
inline Pack<4> sqrt(Pack<4> a) { return {_mm256_sqrt_pd(a.v)}; }
inline Pack<4> max(Pack<4> a, Pack<4> b) { return {_mm256_max_pd(a.v, b.v)}; }
inline Pack<4> neg(Pack<4> a) { return {_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0))}; }
inline Mask<4> cmp_lt(Pack<4> a, Pack<4> b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)}; }
inline Mask<4> cmp_ge(Pack<4> a, Pack<4> b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ)}; }
inline Mask<4> mask_and(Mask<4> a, Mask<4> b) { return {_mm256_and_pd(a.v, b.v)}; }
inline Pack<4> select(Mask<4> m, Pack<4> a, Pack<4> b) {
  return {_mm256_blendv_pd(b.v, a.v, m.v)};
}
inline UPack<4> to_bits(Pack<4> a) { return {_mm256_castpd_si256(a.v)}; }
inline Pack<4> from_bits(UPack<4> a) { return {_mm256_castsi256_pd(a.v)}; }
template <int K> UPack<4> shr(UPack<4> a) { return {_mm256_srli_epi64(a.v, K)}; }
inline Mask<4> nonzero(UPack<4> a) {
  __m256i eq = _mm256_cmpeq_epi64(a.v, _mm256_setzero_si256());
  return {_mm256_castsi256_pd(_mm256_xor_si256(eq, _mm256_set1_epi64x(-1)))};
}
inline unsigned movemask(Mask<4> m) {
  return static_cast<unsigned>(_mm256_movemask_pd(m.v));
}

inline U32Pack<4> mullo32(U32Pack<4> a, std::uint32_t b) {
  return {_mm_mullo_epi32(a.v, _mm_set1_epi32(static_cast<int>(b)))};
}
inline U32Pack<4> mulhi32(U32Pack<4> a, std::uint32_t b) {
  const __m128i bb = _mm_set1_epi32(static_cast<int>(b));
  const __m128i even = _mm_mul_epu32(a.v, bb);                        // lanes 0,2
  const __m128i odd = _mm_mul_epu32(_mm_srli_epi64(a.v, 32), bb);     // lanes 1,3
  const __m128i hi_mask = _mm_set1_epi64x(static_cast<long long>(0xFFFFFFFF00000000ull));
  return {_mm_or_si128(_mm_srli_epi64(even, 32), _mm_and_si128(odd, hi_mask))};
}
inline UPack<4> widen_u64(U32Pack<4> hi, U32Pack<4> lo) {
  const __m256i h = _mm256_cvtepu32_epi64(hi.v);
  const __m256i l = _mm256_cvtepu32_epi64(lo.v);
  return {_mm256_or_si256(_mm256_slli_epi64(h, 32), l)};
}

#endif  // SPTQ_PACK_AVX2

}  // namespace sptq::simd
