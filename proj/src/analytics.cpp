// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sirs/errors.hpp"
#include "sirs/format.hpp"
#include "sirs/linalg.hpp"

namespace sirs::analytics {

// lgamma_r leaves no global sign state behind, unlike lgamma.
double log_gamma(double x) noexcept {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

double log_pmf(std::uint64_t b, double alpha, double log_head) {
  return log_head + log_gamma(static_cast<double>(b) + alpha) - log_gamma(static_cast<double>(b) + 1.0);
}

double log_pmf_head(std::uint64_t a, double alpha) {
  const double da = static_cast<double>(a);
  return std::log(alpha) + log_gamma(da + 1.0) - log_gamma(alpha + da + 1.0);
}

// sinh(z) / z.
double sinhc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}

constexpr double kConfluent = 1e-6;

// Divided difference of r -> exp(-r x) at (a, b).
double dd2(double a, double b, double x) {
  const double m = 0.5 * (a + b);
  return -x * std::exp(-m * x) * sinhc(0.5 * (a - b) * x);
}

// Divided difference of r -> exp(-r x) at three points.
double dd3(double a, double b, double c, double x) {
  std::array<double, 3> p{a, b, c};
  std::sort(p.begin(), p.end());
  if (p[2] - p[0] >= kConfluent) return (dd2(p[1], p[2], x) - dd2(p[0], p[1], x)) / (p[2] - p[0]);
  // Taylor expansion about the mean m: sum_k (-x)^k / k! h_{k-2}(d), where
  // h_j are complete homogeneous polynomials of the offsets d.
  const double m = (p[0] + p[1] + p[2]) / 3.0;
  const std::array<double, 3> d{p[0] - m, p[1] - m, p[2] - m};
  std::array<double, 4> h{1.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 3; j >= 1; --j) {
      double acc = 0.0;
      double pw = 1.0;
      for (int k = 0; k <= j; ++k) {
        acc += h[j - k] * pw;
        pw *= d[i];
      }
      h[j] = acc;
    }
  }
  double sum = 0.0;
  double coef = x * x / 2.0;
  for (int k = 2; k <= 5; ++k) {
    sum += coef * h[k - 2];
    coef *= -x / static_cast<double>(k + 1);
  }
  return std::exp(-m * x) * sum;
}

using Mat3 = Matrix3;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace

PmfTable immunity_survival_pmf(std::uint64_t a, double alpha) {
  require_positive(alpha, "alpha");
  PmfTable t;
  t.a = a;
  t.alpha = alpha;
  t.p.resize(a + 1);
  if (a == 0) {
    t.p[0] = 1.0;
    return t;
  }
  const double head = log_pmf_head(a, alpha);
  for (std::uint64_t b = 0; b <= a; ++b) t.p[b] = std::exp(log_pmf(b, alpha, head));
  return t;
}

double round_failure_prob(std::uint64_t a, double lambda, double alpha) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  if (a == 0) return 1.0;
  const double head = log_pmf_head(a, alpha);
  const double decay = std::log1p(lambda);
  double sum = 0.0;
  for (std::uint64_t b = 0; b <= a; ++b) {
    sum += std::exp(log_pmf(b, alpha, head) - static_cast<double>(b) * decay);
  }
  return sum;
}

SeriesValue gautschi_series(double alpha, double x, double tol) {
  require_positive(alpha, "alpha");
  require_positive(tol, "tol");
  if (!(x > 0.0 && x < 1.0)) throw InvalidParameter("x must lie in (0, 1)");
  constexpr std::uint64_t kMaxTerms = 1'000'000'000;
  SeriesValue out;
  double term = std::tgamma(alpha);
  double sum = 0.0;
  for (std::uint64_t b = 0; b < kMaxTerms; ++b) {
    sum += term;
    const double db = static_cast<double>(b);
    const double next = term * x * (db + alpha) / (db + 1.0);
    double tail;
    if (alpha <= 1.0) {
      // Gamma(k + alpha) / Gamma(k + 1) <= k^(alpha - 1) <= (b + 1)^(alpha - 1) for k > b.
      tail = std::pow(db + 1.0, alpha - 1.0) * std::pow(x, db + 1.0) / (1.0 - x);
    } else {
      // Term ratios x (k + alpha) / (k + 1) decrease in k; bound the tail geometrically.
      const double q = x * (db + 1.0 + alpha) / (db + 2.0);
      tail = q < 1.0 ? next / (1.0 - q) : INFINITY;
    }
    if (tail <= tol * sum) {
      out.value = sum;
      out.terms = b + 1;
      out.tail_bound = tail;
      return out;
    }
    term = next;
  }
  throw CapacityError("gautschi series did not converge within the term cap");
}

double gamma_tail_bound(std::uint64_t n, double alpha, double t) {
  require_positive(alpha, "alpha");
  require_positive(t, "t");
  if (n == 0) throw InvalidParameter("n must be at least 1");
  return std::exp(static_cast<double>(n) * (std::log1p(t) - t));
}

MaxExponentials expected_max_exponentials(std::uint64_t n, double lambda) {
  require_positive(lambda, "lambda");
  if (n == 0) throw InvalidParameter("n must be at least 1");
  double h = 0.0;
  // Smallest terms first for accuracy.
  for (std::uint64_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return {h / lambda, (1.0 + std::log(static_cast<double>(n))) / lambda};
}

Matrix3 leaf_transition_matrix(double x, double lambda, double alpha) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidParameter("x must be finite and non-negative");
  Mat3 g{};
  g[0][0] = -lambda;
  g[0][1] = lambda;
  g[1][1] = -1.0;
  g[1][2] = 1.0;
  g[2][2] = -alpha;
  g[2][0] = alpha;
  const double norm = 2.0 * x * std::max({lambda, 1.0, alpha});
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const double scale = x / std::ldexp(1.0, squarings);
  for (auto& row : g)
    for (double& v : row) v *= scale;
  Mat3 result{};
  Mat3 term{};
  for (int i = 0; i < 3; ++i) result[i][i] = term[i][i] = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term = multiply(term, g);
    double biggest = 0.0;
    for (auto& row : term)
      for (double& v : row) {
        v /= k;
        biggest = std::max(biggest, std::abs(v));
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) result[i][j] += term[i][j];
    if (biggest < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

double immune_to_infected_path(double x, double lambda, double alpha) {
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  if (!(x >= 0.0)) throw InvalidParameter("x must be non-negative");
  if (x == 0.0) return 0.0;
  // Density of D + H + Q at x (Q has rate 1).
  return alpha * lambda * dd3(alpha, lambda, 1.0, x);
}

double susceptible_to_infected_path(double x, double lambda) {
  require_positive(lambda, "lambda");
  if (!(x >= 0.0)) throw InvalidParameter("x must be non-negative");
  if (x == 0.0) return 0.0;
  return -lambda * dd2(lambda, 1.0, x);
}

double prop_s_constant(double alpha) {
  require_positive(alpha, "alpha");
  return std::min(alpha / (16.0 * (alpha + 1.0) * (alpha + 1.0)), std::exp(-alpha) / 8.0);
}

double conditioned_exponential_rate(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  return a + b;
}

std::uint64_t lumped_state_count(const ProcessParams& p) {
  const std::uint64_t m = p.n + 1;
  switch (p.variant) {
    case Variant::x: return 3 * (m * (m + 1) / 2);
    case Variant::y: return 3 * m;
    case Variant::sis: return 2 * m;
  }
  return 0;
}

OracleSolution exact_mean_survival(const ProcessParams& params) {
  params.validate();
  // Compare before multiplying so huge n cannot overflow the count.
  if (params.n > kOracleStateCap || lumped_state_count(params) > kOracleStateCap) {
    throw CapacityError("lumped chain has more than " + std::to_string(kOracleStateCap) + " states");
  }
  const std::uint64_t n = params.n;
  const bool leaf_imm = params.has_leaf_immunity();
  const std::uint64_t rmax = leaf_imm ? n : 0;
  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  // index[(i * (rmax + 1) + r) * 3 + root]
  std::vector<std::uint64_t> index((n + 1) * (rmax + 1) * 3, kNone);
  OracleSolution sol;
  sol.params = params;
  const std::array<VertexState, 3> roots{VertexState::susceptible, VertexState::infected, VertexState::recovered};
  for (std::uint64_t i = 0; i <= n; ++i) {
    for (std::uint64_t r = 0; r <= (leaf_imm ? n - i : 0); ++r) {
      for (VertexState root : roots) {
        if (root == VertexState::recovered && !params.has_root_immunity()) continue;
        if (root != VertexState::infected && i == 0) continue;  // absorbing
        index[(i * (rmax + 1) + r) * 3 + static_cast<int>(root)] = sol.states.size();
        sol.states.push_back({root, i, r});
      }
    }
  }
  const std::size_t N = sol.states.size();
  auto lookup = [&](const StarState& s) {
    return index[(s.infected * (rmax + 1) + s.recovered) * 3 + static_cast<int>(s.root)];
  };

  struct Entry {
    std::size_t row, col;
    double value;
  };
  std::vector<Entry> entries;
  std::vector<double> reinfection(N, 0.0);
  std::size_t kl = 0, ku = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const OracleState& os = sol.states[k];
    const StarState s{os.root, os.infected, os.recovered, 0.0};
    const RateTable table = star_transition_rates(s, params);
    entries.push_back({k, k, table.total()});
    for (const Transition& tr : table) {
      if (tr.rate <= 0.0) continue;
      if (tr.kind == TransitionKind::root_reinfection) reinfection[k] = tr.rate;
      StarState t = s;
      apply_transition(t, tr.kind, params);
      if (t.absorbed()) continue;
      const std::size_t col = lookup(t);
      entries.push_back({k, col, -tr.rate});
      if (col < k) kl = std::max(kl, k - col);
      else ku = std::max(ku, col - k);
    }
  }
  BandedLU lu(N, kl, ku);
  for (const Entry& e : entries) lu.add(e.row, e.col, e.value);
  lu.factorize();
  sol.expected_time.assign(N, 1.0);
  lu.solve(sol.expected_time);
  sol.expected_psi = reinfection;
  lu.solve(sol.expected_psi);
  for (std::size_t k = 0; k < N; ++k) {
    if (!(sol.expected_time[k] > 0.0) || !std::isfinite(sol.expected_time[k])) {
      throw ConsistencyError("non-positive expected absorption time in state " + std::to_string(k));
    }
  }
  const std::size_t start = lookup(StarState{VertexState::infected, 0, 0, 0.0});
  sol.mean_tau = sol.expected_time[start];
  sol.mean_psi = sol.expected_psi[start];
  return sol;
}

void write_oracle_csv(std::ostream& out, const OracleSolution& s) {
  out << "root,infected,recovered,expected_time,expected_psi\n";
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    out << state_letter(s.states[k].root) << ',' << s.states[k].infected << ',' << s.states[k].recovered << ','
        << format_double(s.expected_time[k]) << ',' << format_double(s.expected_psi[k]) << '\n';
  }
}

}  // namespace sirs::analytics
