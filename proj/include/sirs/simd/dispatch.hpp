// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>

namespace sirs::simd {

// Instruction-set tiers for which kernels exist. Every tier produces
// bit-identical results; the choice only affects speed.
enum class Level { scalar = 0, avx2 = 1 };

// Best tier the running CPU supports.
Level detected_level() noexcept;

// Tier used by the dispatching kernels. Defaults to detected_level(), lowered
// by SIRS_SIMD=scalar in the environment or by set_level().
Level active_level() noexcept;

// Requests a tier; clamped to detected_level(). Returns the tier in effect.
Level set_level(Level requested) noexcept;

std::string_view level_name(Level level) noexcept;
std::optional<Level> parse_level(std::string_view name) noexcept;

// RAII override used by equivalence tests.
class ScopedLevel {
 public:
  explicit ScopedLevel(Level requested) noexcept : previous_(active_level()) { set_level(requested); }
  ~ScopedLevel() { set_level(previous_); }
  ScopedLevel(const ScopedLevel&) = delete;
  ScopedLevel& operator=(const ScopedLevel&) = delete;

 private:
  Level previous_;
};

}  // namespace sirs::simd
