// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "sirs/simd/kernels.hpp"

namespace sirs {

// Addresses one random stream: a master seed plus a short path such as
// (grid point, replica) or (replica, round).
struct SeedSpec {
  static constexpr std::size_t kMaxDepth = 4;

  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> stream_path;

  SeedSpec() = default;
  SeedSpec(std::uint64_t master, std::initializer_list<std::uint64_t> path)
      : master_seed(master), stream_path(path) {}
  SeedSpec(std::uint64_t master, std::vector<std::uint64_t> path)
      : master_seed(master), stream_path(std::move(path)) {}

  // Same master seed, path extended by one component.
  SeedSpec child(std::uint64_t component) const;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// Hashes (master_seed, stream_path) into a Philox key. Throws
// InvalidParameter if the path is deeper than kMaxDepth.
simd::PhiloxKey derive_key(const SeedSpec& seed);

// Counter-space tags so sequential streams and clock bundles derived from the
// same key never share a counter.
enum class CounterDomain : std::uint32_t { sequential = 0, clocks = 1 };

// Maps 64 random bits to a double in the open interval (0, 1).
inline double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential stream over Philox counters (block index in words 0-1). Output
// is a pure function of the key and the number of values drawn so far.
// Blocks are generated in batches through the SIMD kernel layer.
class RandomStream {
 public:
  explicit RandomStream(simd::PhiloxKey key) noexcept : key_(key) {}

  std::uint64_t next_u64();
  // Uniform on (0, 1); never returns 0 or 1.
  double uniform() { return bits_to_open_unit(next_u64()); }
  // Exp(rate) sample; throws InvalidParameter unless rate > 0.
  double exponential(double rate);

  simd::PhiloxKey key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  static constexpr std::size_t kBatch = 32;

  void refill();

  simd::PhiloxKey key_;
  std::uint64_t block_ = 0;  // next block index to generate
  std::array<std::uint64_t, kBatch * 2> buffer_{};
  std::size_t pos_ = kBatch * 2;
  std::uint64_t draws_ = 0;
};

RandomStream derive_stream(const SeedSpec& seed);

// Exp(rate) draw from the stream; mean 1/rate.
inline double sample_exponential(RandomStream& stream, double rate) { return stream.exponential(rate); }

}  // namespace sirs
