// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sirs/couplings.hpp"
#include "sirs/engine.hpp"
#include "sirs/process.hpp"
#include "sirs/stats.hpp"

namespace sirs {

struct AuditToggles {
  bool coupling = false;
  bool floor = false;
  bool residual = false;
  bool reinfection_gap = false;
};

struct ExperimentSpec {
  std::vector<ProcessParams> grid;
  std::uint64_t replicas = 1000;
  std::uint64_t master_seed = 0;
  Engine engine = Engine::lumped;
  double horizon = 1e8;
  unsigned workers = 1;  // 0: hardware concurrency; results do not depend on it
  AuditToggles audits;

  // Throws InvalidParameter on an empty grid, zero replicas, a non-positive
  // horizon or invalid process parameters.
  void validate() const;
};

inline constexpr double kUnreliableCensoredFraction = 0.01;

struct PointResult {
  ProcessParams params;
  stats::Summary tau;  // over uncensored replicas
  stats::Summary psi;  // over uncensored replicas
  std::uint64_t replicas = 0;
  std::uint64_t censored = 0;
  bool unreliable = false;            // more than 1% censored
  std::uint64_t floor_passes = 0;     // min non-immune fraction >= prop_s_constant(alpha)
  double mean_events = 0.0;
};

struct ExperimentResult {
  std::vector<PointResult> points;
};

// Replica k of point p uses SeedSpec{master_seed, {p, k}}; aggregation runs in
// replica order, so the result is bit-identical for any worker count.
ExperimentResult run_grid(const ExperimentSpec& spec);

enum class FitMode : std::uint8_t { vary_lambda_fixed_n, vary_n_fixed_lambda };

struct FitOptions {
  // Keep points with (lambda^2 n)^alpha >= dominance_factor * log n; 0 keeps all.
  double dominance_factor = 10.0;
};

struct ExponentFit {
  stats::LinearFit fit;  // log mean tau against log(lambda^2 n)
  std::vector<std::size_t> used;  // indices of points that passed the filter
};

// Throws InsufficientRange when fewer than three usable points remain, or
// InvalidParameter when the grid does not match the mode (mixed n or lambda).
ExponentFit fit_exponent(const ExperimentResult& result, FitMode mode, const FitOptions& options = {});

// (lambda^2 n)^alpha / (lambda + 1)^(2 alpha) + log n.
double scaling_profile(const ProcessParams& params);

// max/min over points of mean tau divided by `profile`.
double band_ratio(const ExperimentResult& result, double (*profile)(const ProcessParams&));

// Failure frequency of the subprocess started at root recovered with `a`
// infected leaves, trial k on seed.child(k). Wilson 99% interval.
stats::Proportion empirical_round_failure(std::uint64_t a, double lambda, double alpha, std::uint64_t trials,
                                          const SeedSpec& seed, unsigned workers = 1);

struct FloorAudit {
  ProcessParams params;
  double threshold = 0.0;
  stats::Proportion pass;  // Wilson 99%
};

// One entry per grid point (variant X points only).
std::vector<FloorAudit> audit_floor(const ExperimentSpec& spec);

struct CoupledSummary {
  std::uint64_t point = 0;
  std::uint64_t replica = 0;
  std::uint64_t psi_x = 0;
  std::uint64_t psi_y = 0;
  std::uint64_t rounds = 0;  // X rounds audited for |I^R| dominance
  std::uint64_t containment_checks = 0;
  bool y_capped = false;
  bool psi_ok = true;
  bool ir_ok = true;
  bool duration_ok = true;
  bool containment_ok = true;
  bool passed() const noexcept { return psi_ok && ir_ok && duration_ok && containment_ok; }
};

struct CouplingAudit {
  std::vector<CoupledSummary> runs;  // ordered by (point, replica)
  std::uint64_t passed = 0;
  double mean_psi_x = 0.0;
  double mean_psi_y = 0.0;
  double pass_rate() const noexcept {
    return runs.empty() ? 1.0 : static_cast<double>(passed) / static_cast<double>(runs.size());
  }
};

// Coupled run k of point p uses SeedSpec{master_seed, {p, k}}. Throws
// ConsistencyError if any run fails and `throw_on_failure`.
CouplingAudit audit_coupling(const ExperimentSpec& spec, const CouplingOptions& options = {},
                             bool throw_on_failure = true);

struct EngineComparison {
  ProcessParams params;
  stats::Summary lumped;
  stats::Summary general;
  double z = 0.0;
  double ks = 0.0;
  double ks_critical = 0.0;  // two-sample, 0.1% level
  bool agree() const noexcept { return z <= 4.0 && ks < ks_critical; }
};

// Independent samples per engine: lumped on {p, 0, k}, general on {p, 1, k}.
// Throws ConsistencyError on divergence when `throw_on_failure`.
std::vector<EngineComparison> compare_engines(const ExperimentSpec& spec, bool throw_on_failure = true);

struct ResidualAudit {
  ProcessParams params;
  stats::Summary residual;  // (tau - tau_S)+ of the failed round
  double bound = 0.0;       // 2 log n
  bool pass() const noexcept { return residual.mean <= bound; }
};

// One failed round per replica.
std::vector<ResidualAudit> audit_residual(const ExperimentSpec& spec);

struct GapAudit {
  ProcessParams params;
  std::uint64_t b = 0;
  stats::Summary gap;        // tau_{i+1} - tau_i^S over succeeded rounds with |I^S| = b
  double exact_mean = 0.0;   // E[1/V | V >= 1] / (lambda + 1), V ~ Bin(b, lambda / (lambda + 1))
  double lower = 0.0;        // 1 / ((lambda + 1) b)
  double dominance_excess = 0.0;  // sup (F_emp - F_Exp((lambda+1) b))
  double dominance_critical = 0.0;
  bool pass() const noexcept {
    return gap.mean >= lower - 4 * gap.se && std::abs(gap.mean - exact_mean) <= 4 * gap.se &&
           dominance_excess < dominance_critical;
  }
};

// Collects `samples` gaps per b from replicas in batches of spec.replicas.
std::vector<GapAudit> audit_reinfection_gap(const ExperimentSpec& spec, const std::vector<std::uint64_t>& b_values,
                                            std::uint64_t samples);

}  // namespace sirs
