// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace sirs::simd {

struct PhiloxKey {
  std::uint32_t k0 = 0;
  std::uint32_t k1 = 0;
  friend bool operator==(const PhiloxKey&, const PhiloxKey&) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

// Philox4x32-10 applied to a single counter.
PhiloxBlock philox4x32(PhiloxKey key, PhiloxBlock counter) noexcept;

// out[j] = philox4x32(key, base + j), where "+ j" touches only word 0.
// Requires base[0] + out.size() <= 2^32 (callers split at the carry).
void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out);

// y[j] += a * x[j]. Multiply and add are rounded separately in every tier.
void axpy(double a, std::span<const double> x, std::span<double> y);

// Number of entries equal to value.
std::size_t count_equal(std::span<const std::uint8_t> states, std::uint8_t value);

// Number of positions where inner == value but outer != value, i.e. the size
// of {v : v in inner-set} \ {v : v in outer-set}.
std::size_t count_subset_violations(std::span<const std::uint8_t> inner,
                                    std::span<const std::uint8_t> outer, std::uint8_t value);

// Per-tier entry points, exposed for equivalence tests and benchmarks.
namespace scalar {
void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
std::size_t count_equal(const std::uint8_t* s, std::size_t n, std::uint8_t value) noexcept;
std::size_t count_subset_violations(const std::uint8_t* inner, const std::uint8_t* outer,
                                    std::size_t n, std::uint8_t value) noexcept;
}  // namespace scalar

namespace avx2 {
void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
std::size_t count_equal(const std::uint8_t* s, std::size_t n, std::uint8_t value) noexcept;
std::size_t count_subset_violations(const std::uint8_t* inner, const std::uint8_t* outer,
                                    std::size_t n, std::uint8_t value) noexcept;
}  // namespace avx2

}  // namespace sirs::simd
