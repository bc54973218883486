// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sirs::stats {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct Summary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 when count < 2
  double se = 0.0;        // sqrt(variance / count)
  double ci_low = 0.0;    // normal 95% interval
  double ci_high = 0.0;
};

// Two-pass mean and variance in index order, so the result depends only on
// the sequence.
Summary summarize(std::span<const double> values);

struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval.
Proportion wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

// Sup distance between the empirical CDF of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Sup distance between two empirical CDFs.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic critical values: c(level) * sqrt(1/n) and c(level) *
// sqrt((n+m)/(nm)) with c = sqrt(-ln(level/2)/2).
double ks_critical(std::uint64_t n, double level);
double ks_critical(std::uint64_t n, std::uint64_t m, double level);

// Asymptotic p-value P(K > sqrt(n_eff) * d) of the Kolmogorov distribution.
double ks_pvalue(double d, double n_eff);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 1 when the response is constant and fitted exactly
};

// Ordinary least squares of y on x. Needs >= 2 distinct x values.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace sirs::stats
