// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 tier. Functions carry a target attribute instead of relying on global
// -mavx2, so the binary still runs on CPUs without AVX2 (dispatch never
// calls in here on such machines).

#include "sirs/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SIRS_HAVE_X86 1
#else
#define SIRS_HAVE_X86 0
#endif

namespace sirs::simd::avx2 {

#if SIRS_HAVE_X86

#define SIRS_AVX2 __attribute__((target("avx2")))

namespace {

SIRS_AVX2 inline void mulhilo8(__m256i a, __m256i m, __m256i& hi, __m256i& lo) noexcept {
  // _mm256_mul_epu32 only multiplies the even 32-bit lanes; odd lanes go
  // through a shifted copy.
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

SIRS_AVX2 void philox8(PhiloxKey key, const PhiloxBlock& base, std::uint32_t offset,
                       PhiloxBlock* out) noexcept {
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(base[0] + offset)), lane);
  __m256i c1 = _mm256_set1_epi32(static_cast<int>(base[1]));
  __m256i c2 = _mm256_set1_epi32(static_cast<int>(base[2]));
  __m256i c3 = _mm256_set1_epi32(static_cast<int>(base[3]));
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  std::uint32_t k0 = key.k0;
  std::uint32_t k1 = key.k1;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    __m256i hi0, lo0, hi1, lo1;
    mulhilo8(c0, m0, hi0, lo0);
    mulhilo8(c2, m1, hi1, lo1);
    const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
    c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
    c1 = lo1;
    c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
    c3 = lo0;
  }
  alignas(32) std::uint32_t w[4][8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), c0);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), c1);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), c2);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), c3);
  for (int j = 0; j < 8; ++j) out[j] = {w[0][j], w[1][j], w[2][j], w[3][j]};
}

SIRS_AVX2 inline std::size_t popcount32(std::uint32_t v) noexcept {
  return static_cast<std::size_t>(__builtin_popcount(v));
}

}  // namespace

SIRS_AVX2 void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) noexcept {
  const std::size_t n = out.size();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) philox8(key, base, static_cast<std::uint32_t>(j), out.data() + j);
  if (j < n) {
    PhiloxBlock tail_base = base;
    tail_base[0] += static_cast<std::uint32_t>(j);
    scalar::philox_fill(key, tail_base, out.subspan(j));
  }
}

SIRS_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + j));
    _mm256_storeu_pd(y + j, _mm256_add_pd(_mm256_loadu_pd(y + j), t));
  }
  scalar::axpy(a, x + j, y + j, n - j);
}

SIRS_AVX2 std::size_t count_equal(const std::uint8_t* s, std::size_t n, std::uint8_t value) noexcept {
  const __m256i v = _mm256_set1_epi8(static_cast<char>(value));
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + 32 <= n; j += 32) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s + j));
    count += popcount32(static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(x, v))));
  }
  return count + scalar::count_equal(s + j, n - j, value);
}

SIRS_AVX2 std::size_t count_subset_violations(const std::uint8_t* inner, const std::uint8_t* outer,
                                              std::size_t n, std::uint8_t value) noexcept {
  const __m256i v = _mm256_set1_epi8(static_cast<char>(value));
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + 32 <= n; j += 32) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(inner + j));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(outer + j));
    const __m256i bad = _mm256_andnot_si256(_mm256_cmpeq_epi8(b, v), _mm256_cmpeq_epi8(a, v));
    count += popcount32(static_cast<std::uint32_t>(_mm256_movemask_epi8(bad)));
  }
  return count + scalar::count_subset_violations(inner + j, outer + j, n - j, value);
}

#else  // no x86: forward to the reference tier

void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) noexcept {
  scalar::philox_fill(key, base, out);
}
void axpy(double a, const double* x, double* y, std::size_t n) noexcept { scalar::axpy(a, x, y, n); }
std::size_t count_equal(const std::uint8_t* s, std::size_t n, std::uint8_t value) noexcept {
  return scalar::count_equal(s, n, value);
}
std::size_t count_subset_violations(const std::uint8_t* inner, const std::uint8_t* outer,
                                    std::size_t n, std::uint8_t value) noexcept {
  return scalar::count_subset_violations(inner, outer, n, value);
}

#endif

}  // namespace sirs::simd::avx2
