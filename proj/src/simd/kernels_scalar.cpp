// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

// Reference kernels. These define the results; every other tier must match
// them bit for bit.

#include "sirs/simd/kernels.hpp"

namespace sirs::simd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxBlock philox4x32(PhiloxKey key, PhiloxBlock c) noexcept {
  std::uint32_t k0 = key.k0;
  std::uint32_t k1 = key.k1;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
  }
  return c;
}

namespace scalar {

void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) noexcept {
  for (std::size_t j = 0; j < out.size(); ++j) {
    PhiloxBlock c = base;
    c[0] += static_cast<std::uint32_t>(j);
    out[j] = philox4x32(key, c);
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t j = 0; j < n; ++j) {
    const double t = a * x[j];
    y[j] = y[j] + t;
  }
}

std::size_t count_equal(const std::uint8_t* s, std::size_t n, std::uint8_t value) noexcept {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) count += (s[j] == value);
  return count;
}

std::size_t count_subset_violations(const std::uint8_t* inner, const std::uint8_t* outer,
                                    std::size_t n, std::uint8_t value) noexcept {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) count += (inner[j] == value && outer[j] != value);
  return count;
}

}  // namespace scalar
}  // namespace sirs::simd
