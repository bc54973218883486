// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sirs/process.hpp"

namespace sirs::analytics {

// log|Gamma(x)|; safe to call from several threads.
double log_gamma(double x) noexcept;

// Law of the number b of infected leaves left when the root's immunity ends,
// given a infected leaves when the root recovered:
//   p(b) = alpha * C(a, b) * B(b + alpha, a - b + 1).
struct PmfTable {
  std::uint64_t a = 0;
  double alpha = 1.0;
  std::vector<double> p;  // p[b], b = 0..a
};

PmfTable immunity_survival_pmf(std::uint64_t a, double alpha);

// Probability that a round fails given a infected leaves at root recovery:
// sum_b p(b) (1 + lambda)^-b, and 1 for a = 0.
double round_failure_prob(std::uint64_t a, double lambda, double alpha);

struct SeriesValue {
  double value = 0.0;
  std::uint64_t terms = 0;
  double tail_bound = 0.0;  // rigorous bound on the omitted tail
};

// S_alpha(x) = sum_{b >= 0} Gamma(b + alpha) / Gamma(b + 1) x^b for 0 < x < 1,
// truncated once the tail bound drops below tol * partial sum.
SeriesValue gautschi_series(double alpha, double x, double tol);

// Chernoff bound ((1 + t) e^-t)^n on P(Gamma(n, alpha) >= (1 + t) n / alpha).
double gamma_tail_bound(std::uint64_t n, double alpha, double t);

struct MaxExponentials {
  double mean = 0.0;   // H_n / lambda
  double bound = 0.0;  // (1 + log n) / lambda
};

MaxExponentials expected_max_exponentials(std::uint64_t n, double lambda);

// Indexed by VertexState values: 0 = S, 1 = I, 2 = R.
using Matrix3 = std::array<std::array<double, 3>, 3>;

// exp(x G) for the single-leaf generator under a permanently infected root:
// S -> I at lambda, I -> R at 1, R -> S at alpha.
Matrix3 leaf_transition_matrix(double x, double lambda, double alpha);

// P(D + H <= x < D + H + Q) with D ~ Exp(alpha), H ~ Exp(lambda), Q ~ Exp(1):
// an immune leaf regains susceptibility, is infected, and is still infected
// at x.
double immune_to_infected_path(double x, double lambda, double alpha);

// P(H <= x < H + Q) with H ~ Exp(lambda), Q ~ Exp(1).
double susceptible_to_infected_path(double x, double lambda);

// min(alpha / (16 (alpha + 1)^2), e^-alpha / 8).
double prop_s_constant(double alpha);

// Rate of xi ~ Exp(a) conditioned on xi < eta ~ Exp(b).
double conditioned_exponential_rate(double a, double b);

struct OracleState {
  VertexState root;
  std::uint64_t infected;
  std::uint64_t recovered;
};

struct OracleSolution {
  ProcessParams params;
  std::vector<OracleState> states;     // transient states, ordered by (i, r, root)
  std::vector<double> expected_time;   // to absorption
  std::vector<double> expected_psi;    // root reinfections before absorption
  double mean_tau = 0.0;               // from root I, no infected leaves
  double mean_psi = 0.0;
};

inline constexpr std::uint64_t kOracleStateCap = 10'000;

// Number of lumped states, absorbing included: 3(n+1)(n+2)/2 for X, 3(n+1)
// for Y, 2(n+1) for SIS.
std::uint64_t lumped_state_count(const ProcessParams& params);

// First-step equations of the lumped chain solved by banded LU. Throws
// CapacityError above kOracleStateCap lumped states.
OracleSolution exact_mean_survival(const ProcessParams& params);

// CSV with header root,infected,recovered,expected_time,expected_psi.
void write_oracle_csv(std::ostream& out, const OracleSolution& solution);

}  // namespace sirs::analytics
