// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "sirs/process.hpp"
#include "sirs/rng.hpp"
#include "sirs/rounds.hpp"

namespace sirs {

struct CouplingOptions {
  std::uint64_t round_cap = 1'000'000;  // Y keeps going alone after X fails, up to this many rounds
  std::size_t interior_samples = 8;     // uniform containment checks per shared round
  bool throw_on_violation = true;
};

// X and Y on the star, round k of each driven by the fresh bundle keyed by
// seed.child(k) and aligned at that process's own round start. Y reads the
// same bundle but its leaves never become immune, so leaf D clocks are inert
// for it.
struct CoupledRun {
  std::uint64_t psi_x = 0;
  std::uint64_t psi_y = 0;
  double tau_x = 0.0;
  bool y_capped = false;
  std::vector<RoundRecord> x_rounds;
  std::vector<RoundRecord> y_rounds;  // rounds 1..x_rounds.size() (fewer if Y failed first)
  std::vector<double> x_durations;    // round-relative length of each succeeded X round
  std::vector<double> y_durations;    // same for Y, over rounds shared with X

  std::uint64_t containment_checks = 0;
  std::uint64_t containment_violations = 0;
  bool psi_ok = true;          // psi_x <= psi_y
  bool ir_ok = true;           // |I^R_X,i| <= |I^R_Y,i| over every X round
  bool duration_ok = true;     // Y's round no longer than X's while X succeeds
  bool containment_ok = true;  // infected set of X inside that of Y at checked instants

  bool passed() const noexcept { return psi_ok && ir_ok && duration_ok && containment_ok; }
};

// Throws ConsistencyError on any audit violation when throw_on_violation.
CoupledRun run_coupled_xy(const ProcessParams& params, const SeedSpec& seed, const CouplingOptions& options = {});

// SIRS with artificial root reinfection: once no vertex is infected the root
// is infected immediately if susceptible, otherwise the moment its immunity
// ends. Reads the same bundle as run_survival's general engine under the same
// seed, so both agree up to the first extinction.
struct SustainedRun {
  std::vector<RoundRecord> rounds;  // exactly round_cap closed rounds
  double first_extinction = 0.0;    // survival time of the plain process
  std::uint64_t first_failed_round = 0;
  std::uint64_t events = 0;
};

SustainedRun run_sustained(const ProcessParams& params, const SeedSpec& seed, std::uint64_t round_cap);

}  // namespace sirs
