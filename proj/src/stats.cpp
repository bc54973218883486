// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sirs/errors.hpp"

namespace sirs::stats {

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.count - 1);
  }
  s.se = std::sqrt(s.variance / static_cast<double>(s.count));
  s.ci_low = s.mean - kZ95 * s.se;
  s.ci_high = s.mean + kZ95 * s.se;
  return s;
}

Proportion wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw InvalidParameter("wilson interval needs at least one trial");
  if (successes > trials) throw InvalidParameter("more successes than trials");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  p.estimate = phat;
  p.low = std::max(0.0, centre - half);
  p.high = std::min(1.0, centre + half);
  return p;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidParameter("ks_statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double f = cdf(samples[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return d;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("ks_statistic needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {
double ks_coefficient(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidParameter("significance level must lie in (0, 1)");
  return std::sqrt(-std::log(level / 2.0) / 2.0);
}
}  // namespace

double ks_critical(std::uint64_t n, double level) {
  if (n == 0) throw InvalidParameter("ks_critical needs n > 0");
  return ks_coefficient(level) * std::sqrt(1.0 / static_cast<double>(n));
}

double ks_critical(std::uint64_t n, std::uint64_t m, double level) {
  if (n == 0 || m == 0) throw InvalidParameter("ks_critical needs n, m > 0");
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return ks_coefficient(level) * std::sqrt((dn + dm) / (dn * dm));
}

double ks_pvalue(double d, double n_eff) {
  const double x = std::sqrt(n_eff) * d;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("ols needs matching inputs of size >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("ols needs at least two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (fit.intercept + fit.slope * x[k]);
    sse += r * r;
  }
  fit.r_squared = syy == 0.0 ? (sse == 0.0 ? 1.0 : 0.0) : 1.0 - sse / syy;
  return fit;
}

}  // namespace sirs::stats
