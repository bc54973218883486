// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sirs {

// X: full SIRS. Y: only the root (vertex 0) gains immunity; leaves return to
// susceptible on recovery. SIS: nobody gains immunity.
enum class Variant : std::uint8_t { x, y, sis };

enum class VertexState : std::uint8_t { susceptible = 0, infected = 1, recovered = 2 };

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view text) noexcept;
char state_letter(VertexState s) noexcept;

struct ProcessParams {
  std::uint64_t n = 0;  // leaves
  double lambda = 1.0;  // infection rate per directed edge
  double alpha = 1.0;   // deimmunization rate (unused by SIS)
  Variant variant = Variant::x;

  // Throws InvalidParameter on lambda <= 0, or alpha <= 0 for X and Y.
  void validate() const;
  bool has_leaf_immunity() const noexcept { return variant == Variant::x; }
  bool has_root_immunity() const noexcept { return variant != Variant::sis; }
};

// Lumped star configuration. Leaves are exchangeable, so the root state plus
// the infected and recovered leaf counts is an exact Markov lumping.
struct StarState {
  VertexState root = VertexState::infected;
  std::uint64_t infected = 0;   // i
  std::uint64_t recovered = 0;  // r (always 0 for Y and SIS)
  double time = 0.0;

  // No infected vertex anywhere.
  bool absorbed() const noexcept { return infected == 0 && root != VertexState::infected; }
  // Checks 0 <= i, r and i + r <= n plus the variant's forbidden states.
  bool valid_for(const ProcessParams& params) const noexcept;
};

enum class TransitionKind : std::uint8_t {
  root_recovery,
  root_deimmunization,
  root_reinfection,
  leaf_infection,
  leaf_recovery,
  leaf_deimmunization,
};

std::string_view to_string(TransitionKind kind) noexcept;

struct Transition {
  TransitionKind kind;
  double rate;
};

// Up to four competing transitions out of a lumped state.
struct RateTable {
  std::array<Transition, 4> entries{};
  std::size_t size = 0;

  double total() const noexcept {
    double t = 0.0;
    for (std::size_t k = 0; k < size; ++k) t += entries[k].rate;
    return t;
  }
  const Transition* begin() const noexcept { return entries.data(); }
  const Transition* end() const noexcept { return entries.data() + size; }
};

// Exit rates of the lumped chain. Root I: {root recovery 1, leaf infection
// lambda(n-i-r), leaf recovery i, leaf deimmunization alpha r}; root R: {root
// deimmunization alpha, leaf recovery, leaf deimmunization}; root S: {root
// reinfection lambda i, leaf recovery, leaf deimmunization}.
RateTable star_transition_rates(const StarState& state, const ProcessParams& params) noexcept;

// Applies one transition to the counts (time is left alone).
void apply_transition(StarState& state, TransitionKind kind, const ProcessParams& params) noexcept;

}  // namespace sirs
