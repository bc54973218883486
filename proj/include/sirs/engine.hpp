// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sirs/process.hpp"
#include "sirs/rng.hpp"
#include "sirs/rounds.hpp"

namespace sirs {

enum class Engine : std::uint8_t { lumped, general };

std::string_view to_string(Engine e) noexcept;
std::optional<Engine> parse_engine(std::string_view text) noexcept;

// Documented size limit of the per-vertex engine; callers that expose it enforce
// it, run_survival does not.
inline constexpr std::uint64_t kGeneralEngineCap = 10'000;

struct SurvivalSample {
  double tau = 0.0;
  std::uint64_t psi = 0;
  std::uint64_t events = 0;                // state-changing transitions
  double min_non_immune_fraction = 1.0;    // min over the run of (n - r)/n; 1 for n = 0
  bool censored = false;                   // horizon reached before extinction
};

struct RunOptions {
  Engine engine = Engine::lumped;
  double horizon = 1e8;
  bool record_rounds = false;
};

struct SurvivalRun {
  SurvivalSample sample;
  std::vector<RoundRecord> rounds;  // filled when record_rounds
  RoundRecord final_round;          // the failed round; meaningless when censored
};

// Runs one replica from root infected, all leaves susceptible. The lumped
// engine draws from derive_stream(seed); the general engine reads the clock
// bundle keyed by derive_key(seed), so a given seed gives different (equally
// distributed) paths under the two engines.
SurvivalRun run_survival(const ProcessParams& params, const SeedSpec& seed, const RunOptions& options = {});

}  // namespace sirs
