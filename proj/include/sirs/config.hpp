// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sirs/engine.hpp"
#include "sirs/experiments.hpp"
#include "sirs/process.hpp"

namespace sirs {

// Grid axes; the expansion is variant-major, then n, lambda, alpha.
struct GridConfig {
  std::vector<Variant> variants{Variant::x};
  std::vector<std::uint64_t> n;
  std::vector<double> lambda;
  std::optional<double> lambda_exponent;  // lambda = n^exponent, replaces `lambda`
  std::vector<double> alpha{1.0};

  std::vector<ProcessParams> expand() const;
};

enum class BandProfile : std::uint8_t { scaling, log_n };

struct FitConfig {
  bool enabled = false;
  bool exponent = true;  // false: band check only
  FitMode mode = FitMode::vary_lambda_fixed_n;
  double dominance_factor = 10.0;
  std::optional<double> slope_min;
  std::optional<double> slope_max;
  BandProfile profile = BandProfile::scaling;
  std::optional<double> band_max;
};

struct RoundFailureConfig {
  std::vector<std::uint64_t> a{1, 5};
  std::vector<double> lambda{0.5};
  std::vector<double> alpha{1.0};
  std::uint64_t trials = 100'000;
};

struct AuditConfig {
  AuditToggles toggles;
  bool engines = false;
  bool round_failure = false;
  std::vector<std::uint64_t> gap_b{1, 5};
  std::uint64_t gap_samples = 10'000;
  std::optional<double> floor_min;  // floor pass rate required; report-only when unset
  RoundFailureConfig round_failure_grid;
};

struct OracleConfig {
  bool states = true;  // write the per-state CSV next to the summary
};

// Everything a command needs; serialized into the manifest so a run can be
// replayed from it alone.
struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t replicas = 1000;
  Engine engine = Engine::lumped;
  double horizon = 1e8;
  unsigned workers = 1;
  std::string output;  // empty: command line, then SIRS_STAR_OUT, then ./sirs-star-out
  GridConfig grid;
  FitConfig fit;
  AuditConfig audit;
  OracleConfig oracle;
  CouplingOptions coupled;

  ExperimentSpec experiment() const;
};

// Flat INI file with sections [experiment] [grid] [fit] [audit] [oracle]
// [coupled]; list values are comma separated. Unknown sections or keys are
// rejected. Throws InvalidParameter with the offending key.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace sirs
