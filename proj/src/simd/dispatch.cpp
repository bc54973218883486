// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sirs/simd/kernels.hpp"

namespace sirs::simd {

namespace {

Level probe_cpu() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Level::avx2;
#endif
  return Level::scalar;
}

Level initial_level() noexcept {
  const Level best = probe_cpu();
  if (const char* env = std::getenv("SIRS_SIMD")) {
    if (auto requested = parse_level(env)) {
      return static_cast<int>(*requested) < static_cast<int>(best) ? *requested : best;
    }
  }
  return best;
}

std::atomic<Level>& current() noexcept {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

Level detected_level() noexcept {
  static const Level best = probe_cpu();
  return best;
}

Level active_level() noexcept { return current().load(std::memory_order_relaxed); }

Level set_level(Level requested) noexcept {
  const Level best = detected_level();
  const Level chosen = static_cast<int>(requested) < static_cast<int>(best) ? requested : best;
  current().store(chosen, std::memory_order_relaxed);
  return chosen;
}

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
  }
  return "unknown";
}

std::optional<Level> parse_level(std::string_view name) noexcept {
  if (name == "scalar") return Level::scalar;
  if (name == "avx2") return Level::avx2;
  return std::nullopt;
}

void philox_fill(PhiloxKey key, PhiloxBlock base, std::span<PhiloxBlock> out) {
  if (static_cast<std::uint64_t>(base[0]) + out.size() > (std::uint64_t{1} << 32)) {
    throw std::out_of_range("philox_fill: counter word 0 would wrap");
  }
  if (active_level() == Level::avx2) {
    avx2::philox_fill(key, base, out);
  } else {
    scalar::philox_fill(key, base, out);
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  if (active_level() == Level::avx2) {
    avx2::axpy(a, x.data(), y.data(), x.size());
  } else {
    scalar::axpy(a, x.data(), y.data(), x.size());
  }
}

std::size_t count_equal(std::span<const std::uint8_t> states, std::uint8_t value) {
  return active_level() == Level::avx2 ? avx2::count_equal(states.data(), states.size(), value)
                                       : scalar::count_equal(states.data(), states.size(), value);
}

std::size_t count_subset_violations(std::span<const std::uint8_t> inner,
                                    std::span<const std::uint8_t> outer, std::uint8_t value) {
  if (inner.size() != outer.size()) {
    throw std::invalid_argument("count_subset_violations: length mismatch");
  }
  return active_level() == Level::avx2
             ? avx2::count_subset_violations(inner.data(), outer.data(), inner.size(), value)
             : scalar::count_subset_violations(inner.data(), outer.data(), inner.size(), value);
}

}  // namespace sirs::simd
