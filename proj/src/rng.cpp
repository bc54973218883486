// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirs/errors.hpp"

namespace sirs {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

SeedSpec SeedSpec::child(std::uint64_t component) const {
  SeedSpec out = *this;
  out.stream_path.push_back(component);
  return out;
}

simd::PhiloxKey derive_key(const SeedSpec& seed) {
  if (seed.stream_path.size() > SeedSpec::kMaxDepth) {
    throw InvalidParameter("stream path depth " + std::to_string(seed.stream_path.size()) +
                           " exceeds " + std::to_string(SeedSpec::kMaxDepth));
  }
  std::uint64_t h = mix64(seed.master_seed ^ 0x6A09E667F3BCC909ull);
  std::uint64_t level = 0;
  for (std::uint64_t component : seed.stream_path) {
    ++level;
    h = mix64(h ^ mix64(component + level * 0x9E3779B97F4A7C15ull));
  }
  h = mix64(h ^ (0xA54FF53A5F1D36F1ull + seed.stream_path.size()));
  return {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
}

void RandomStream::refill() {
  std::array<simd::PhiloxBlock, kBatch> blocks;
  std::size_t done = 0;
  while (done < kBatch) {
    const auto lo = static_cast<std::uint32_t>(block_);
    // Never let word 0 wrap inside one kernel call.
    const std::uint64_t room = (std::uint64_t{1} << 32) - lo;
    const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(room, kBatch - done));
    const simd::PhiloxBlock base = {lo, static_cast<std::uint32_t>(block_ >> 32), 0u,
                                    static_cast<std::uint32_t>(CounterDomain::sequential)};
    simd::philox_fill(key_, base, std::span(blocks).subspan(done, take));
    block_ += take;
    done += take;
  }
  for (std::size_t j = 0; j < kBatch; ++j) {
    buffer_[2 * j] = static_cast<std::uint64_t>(blocks[j][0]) | (static_cast<std::uint64_t>(blocks[j][1]) << 32);
    buffer_[2 * j + 1] = static_cast<std::uint64_t>(blocks[j][2]) | (static_cast<std::uint64_t>(blocks[j][3]) << 32);
  }
  pos_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (pos_ == buffer_.size()) refill();
  ++draws_;
  return buffer_[pos_++];
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidParameter("exponential rate must be positive and finite, got " + std::to_string(rate));
  }
  return -std::log(uniform()) / rate;
}

RandomStream derive_stream(const SeedSpec& seed) { return RandomStream(derive_key(seed)); }

}  // namespace sirs
