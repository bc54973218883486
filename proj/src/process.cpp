// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/process.hpp"

#include <cmath>

#include "sirs/errors.hpp"

namespace sirs {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::x: return "x";
    case Variant::y: return "y";
    case Variant::sis: return "sis";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) noexcept {
  if (text == "x" || text == "X") return Variant::x;
  if (text == "y" || text == "Y") return Variant::y;
  if (text == "sis" || text == "SIS") return Variant::sis;
  return std::nullopt;
}

char state_letter(VertexState s) noexcept {
  switch (s) {
    case VertexState::susceptible: return 'S';
    case VertexState::infected: return 'I';
    case VertexState::recovered: return 'R';
  }
  return '?';
}

std::string_view to_string(TransitionKind kind) noexcept {
  switch (kind) {
    case TransitionKind::root_recovery: return "root_recovery";
    case TransitionKind::root_deimmunization: return "root_deimmunization";
    case TransitionKind::root_reinfection: return "root_reinfection";
    case TransitionKind::leaf_infection: return "leaf_infection";
    case TransitionKind::leaf_recovery: return "leaf_recovery";
    case TransitionKind::leaf_deimmunization: return "leaf_deimmunization";
  }
  return "?";
}

void ProcessParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("lambda must be positive and finite");
  }
  if (variant != Variant::sis && (!(alpha > 0.0) || !std::isfinite(alpha))) {
    throw InvalidParameter("alpha must be positive and finite for variants x and y");
  }
}

bool StarState::valid_for(const ProcessParams& params) const noexcept {
  if (infected > params.n || recovered > params.n - infected) return false;
  if (!params.has_leaf_immunity() && recovered != 0) return false;
  if (!params.has_root_immunity() && root == VertexState::recovered) return false;
  return true;
}

RateTable star_transition_rates(const StarState& s, const ProcessParams& p) noexcept {
  RateTable t;
  const double i = static_cast<double>(s.infected);
  const double r = static_cast<double>(s.recovered);
  // SIS carries no alpha; keep the table shape with a zero rate.
  const double leaf_deimm = p.has_leaf_immunity() ? p.alpha * r : 0.0;
  switch (s.root) {
    case VertexState::infected:
      t.entries[0] = {TransitionKind::root_recovery, 1.0};
      t.entries[1] = {TransitionKind::leaf_infection,
                      p.lambda * static_cast<double>(p.n - s.infected - s.recovered)};
      break;
    case VertexState::recovered:
      t.entries[0] = {TransitionKind::root_deimmunization, p.alpha};
      t.entries[1] = {TransitionKind::leaf_recovery, i};
      t.entries[2] = {TransitionKind::leaf_deimmunization, leaf_deimm};
      t.size = 3;
      return t;
    case VertexState::susceptible:
      t.entries[0] = {TransitionKind::root_reinfection, p.lambda * i};
      t.entries[1] = {TransitionKind::leaf_recovery, i};
      t.entries[2] = {TransitionKind::leaf_deimmunization, leaf_deimm};
      t.size = 3;
      return t;
  }
  t.entries[2] = {TransitionKind::leaf_recovery, i};
  t.entries[3] = {TransitionKind::leaf_deimmunization, leaf_deimm};
  t.size = 4;
  return t;
}

void apply_transition(StarState& s, TransitionKind kind, const ProcessParams& p) noexcept {
  switch (kind) {
    case TransitionKind::root_recovery:
      s.root = p.has_root_immunity() ? VertexState::recovered : VertexState::susceptible;
      break;
    case TransitionKind::root_deimmunization:
      s.root = VertexState::susceptible;
      break;
    case TransitionKind::root_reinfection:
      s.root = VertexState::infected;
      break;
    case TransitionKind::leaf_infection:
      ++s.infected;
      break;
    case TransitionKind::leaf_recovery:
      --s.infected;
      if (p.has_leaf_immunity()) ++s.recovered;
      break;
    case TransitionKind::leaf_deimmunization:
      --s.recovered;
      break;
  }
}

}  // namespace sirs
