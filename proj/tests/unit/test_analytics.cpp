// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "doctest.h"
#include "sirs/analytics.hpp"
#include "sirs/errors.hpp"
#include "sirs/rng.hpp"
#include "sirs/stats.hpp"

using namespace sirs;
using namespace sirs::analytics;

namespace {

// Integral over u = e^-x in (0, 1) of alpha C(a,b) u^(alpha+b-1) (1-u)^(a-b).
double pmf_by_quadrature(int a, int b, double alpha) {
  const double log_choose = std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return alpha * std::exp(log_choose + (alpha + b - 1.0) * std::log(u) + (a - b) * std::log1p(-u));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, 1.0);
}

// Pure-birth chain 0 -> 1 -> ... with the given rates; probability of sitting
// in the last state at time x.
double birth_chain_last(const std::vector<double>& rates, double x) {
  const int k = static_cast<int>(rates.size()) + 1;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) {
    g(i, i) = -rates[i];
    g(i, i + 1) = rates[i];
  }
  // The last state leaks at rate 1 (the recovery clock Q).
  g(k - 1, k - 1) = -1.0;
  const Eigen::MatrixXd p = (x * g).exp();
  return p(0, k - 1);
}

}  // namespace

TEST_CASE("pmf examples") {
  CHECK(immunity_survival_pmf(0, 0.7).p == std::vector<double>{1.0});
  CHECK(immunity_survival_pmf(3, 1.0).p[3] == doctest::Approx(0.25).epsilon(1e-13));
  const auto t = immunity_survival_pmf(1, 1.0);
  CHECK(t.p[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(t.p[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(t.p[0] - pmf_by_quadrature(1, 0, 1.0)) < 1e-8);
  CHECK(std::abs(t.p[1] - pmf_by_quadrature(1, 1, 1.0)) < 1e-8);
  CHECK_THROWS_AS(immunity_survival_pmf(3, 0.0), InvalidParameter);
}

TEST_CASE("pmf normalization up to a = 200") {
  for (double alpha : {0.3, 1.0, 2.7}) {
    for (std::uint64_t a = 0; a <= 200; ++a) {
      double s = 0.0;
      for (double p : immunity_survival_pmf(a, alpha).p) {
        REQUIRE(p >= 0.0);
        s += p;
      }
      REQUIRE(std::abs(s - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("pmf agrees with quadrature up to a = 50") {
  for (double alpha : {0.3, 1.0, 2.7}) {
    for (int a : {1, 2, 5, 13, 27, 50}) {
      const auto t = immunity_survival_pmf(a, alpha);
      for (int b = 0; b <= a; ++b) REQUIRE(std::abs(t.p[b] - pmf_by_quadrature(a, b, alpha)) < 1e-8);
    }
  }
}

TEST_CASE("round failure probability examples") {
  CHECK(round_failure_prob(0, 0.3, 2.0) == 1.0);
  CHECK(round_failure_prob(1, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13));
  // Direct sum of the pmf against (1 + lambda)^-b.
  const auto t = immunity_survival_pmf(20, 2.0);
  double direct = 0.0;
  for (int b = 0; b <= 20; ++b) direct += t.p[b] * std::pow(1.5, -b);
  CHECK(round_failure_prob(20, 0.5, 2.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("round failure probability is strictly decreasing in a and lambda") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    double prev = 1.0;
    for (std::uint64_t a = 1; a <= 300; ++a) {
      const double f = round_failure_prob(a, 0.3, alpha);
      REQUIRE(f < prev);
      prev = f;
    }
    prev = 1.0;
    for (double lambda = 0.01; lambda < 20.0; lambda *= 1.3) {
      const double f = round_failure_prob(7, lambda, alpha);
      REQUIRE(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("round failure probability scales like (lambda a)^-alpha") {
  auto band = [](double lambda, std::vector<std::uint64_t> as) {
    double lo = INFINITY, hi = 0.0;
    for (auto a : as) {
      const double v = round_failure_prob(a, lambda, 1.0) * lambda * static_cast<double>(a);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi / lo;
  };
  CHECK(band(0.2, {100, 1000, 10000}) <= 3.0);
  for (double lambda : {0.05, 0.2, 0.5}) CHECK(band(lambda, {10, 30, 100, 300, 1000, 3000, 10000}) <= 3.0);
}

TEST_CASE("gautschi series examples") {
  CHECK(gautschi_series(1.0, 2.0 / 3.0, 1e-12).value == doctest::Approx(3.0).epsilon(1e-11));
  CHECK(std::abs(gautschi_series(1.0, 2.0 / 3.0, 1e-13).value - 3.0) < 1e-10);
  CHECK(gautschi_series(2.0, 0.5, 1e-12).value == doctest::Approx(4.0).epsilon(1e-11));
  double brute = 0.0;
  double term = std::tgamma(0.5);
  for (int b = 0; b < 100000; ++b) {
    brute += term;
    term *= 0.9 * (b + 0.5) / (b + 1.0);
  }
  const auto s = gautschi_series(0.5, 0.9, 1e-8);
  CHECK(std::abs(s.value - brute) <= 1e-8 * brute);
  CHECK_THROWS_AS(gautschi_series(1.0, 1.0, 1e-8), InvalidParameter);
  CHECK_THROWS_AS(gautschi_series(1.0, 0.0, 1e-8), InvalidParameter);
}

TEST_CASE("gautschi recurrence (1 - x) S_a(x) = (a - 1) S_{a-1}(x)") {
  const double tol = 1e-12;
  for (double alpha : {1.5, 2.0, 3.7}) {
    for (double x : {0.7, 0.9}) {
      const double lhs = (1.0 - x) * gautschi_series(alpha, x, tol).value;
      const double rhs = (alpha - 1.0) * gautschi_series(alpha - 1.0, x, tol).value;
      CHECK(std::abs(lhs - rhs) <= 10.0 * tol * std::abs(rhs));
    }
  }
}

TEST_CASE("gamma tail bound") {
  CHECK(gamma_tail_bound(3, 1.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gamma_tail_bound(2, 1.0, 1.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-13));
  CHECK(gamma_tail_bound(2, 1.0, 1.0) >= 5.0 * std::exp(-4.0));
  CHECK(gamma_tail_bound(1, 1.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));
  CHECK(gamma_tail_bound(1, 1.0, 1.0) >= std::exp(-2.0));
  // Gamma(n, 1) tail at (1 + t) n via the Erlang sum, for a grid of (n, t).
  for (int n : {1, 2, 5, 20}) {
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
      const double s = (1 + t) * n;
      double tail = 0.0, term = 1.0;
      for (int k = 0; k < n; ++k) {
        tail += term;
        term *= s / (k + 1);
      }
      tail *= std::exp(-s);
      CHECK(gamma_tail_bound(n, 1.0, t) >= tail);
    }
  }
}

TEST_CASE("expected maximum of exponentials") {
  CHECK(expected_max_exponentials(1, 2.0).mean == doctest::Approx(0.5));
  CHECK(expected_max_exponentials(3, 1.0).mean == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  for (std::uint64_t n : {1u, 2u, 10u, 1000u}) {
    const auto m = expected_max_exponentials(n, 0.7);
    CHECK(m.mean <= m.bound);
  }
  RandomStream s = derive_stream(SeedSpec(31, {}));
  const int trials = 100000;
  std::vector<double> maxima(trials);
  for (auto& m : maxima) {
    m = 0.0;
    for (int k = 0; k < 10; ++k) m = std::max(m, s.exponential(1.0));
  }
  const auto sum = stats::summarize(maxima);
  CHECK(std::abs(sum.mean - expected_max_exponentials(10, 1.0).mean) < 4.0 * sum.se);
}

TEST_CASE("leaf transition matrix") {
  const auto id = leaf_transition_matrix(0.0, 0.5, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id[i][j] == (i == j ? 1.0 : 0.0));
  for (double x : {0.01, 0.5, 1.0, 3.0, 40.0}) {
    for (auto [lambda, alpha] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.3}, std::pair{0.05, 7.0}}) {
      const auto p = leaf_transition_matrix(x, lambda, alpha);
      Eigen::Matrix3d g;
      g << -lambda, lambda, 0, 0, -1, 1, alpha, 0, -alpha;
      const Eigen::Matrix3d ref = (x * g).exp();
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(p[i][0] + p[i][1] + p[i][2] - 1.0) < 1e-12);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(p[i][j] - ref(i, j)) < 1e-12);
      }
    }
  }
}

TEST_CASE("leaf transition matrix semigroup property") {
  for (auto [x, y] : {std::pair{0.3, 0.7}, std::pair{1.5, 2.25}, std::pair{0.01, 5.0}}) {
    const auto pxy = leaf_transition_matrix(x + y, 0.4, 1.3);
    const auto px = leaf_transition_matrix(x, 0.4, 1.3);
    const auto py = leaf_transition_matrix(y, 0.4, 1.3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += px[i][k] * py[k][j];
        CHECK(std::abs(s - pxy[i][j]) < 1e-9);
      }
  }
}

TEST_CASE("single-path lower bounds") {
  const auto p = leaf_transition_matrix(1.0, 0.5, 1.0);
  const double via_immunity = immune_to_infected_path(1.0, 0.5, 1.0);
  CHECK(p[2][1] >= via_immunity);
  const double closed = 0.5 / 0.5 * (std::exp(-0.5) - std::exp(-1.0));
  CHECK(susceptible_to_infected_path(1.0, 0.5) == doctest::Approx(closed).epsilon(1e-13));
  CHECK(closed == doctest::Approx(0.2387).epsilon(1e-3));
  CHECK(p[0][1] >= closed);
  // Generic closed form for the immune path away from the singular lines.
  const double l = 0.5, a = 2.0, x = 1.3;
  const double generic = l * a / (1 - l) *
                         ((std::exp(-l * x) - std::exp(-a * x)) / (a - l) - (std::exp(-x) - std::exp(-a * x)) / (a - 1));
  CHECK(immune_to_infected_path(x, l, a) == doctest::Approx(generic).epsilon(1e-12));
}

TEST_CASE("path bounds are continuous across removable singularities") {
  for (double x : {0.2, 1.0, 4.0}) {
    for (auto [lambda, alpha] : {std::tuple{1.0, 1.0}, std::tuple{1.0, 0.4}, std::tuple{0.3, 1.0},
                                 std::tuple{0.7, 0.7}, std::tuple{1.0 + 3e-7, 1.0 - 2e-7}}) {
      const double ref = birth_chain_last({alpha, lambda}, x);
      CHECK(immune_to_infected_path(x, lambda, alpha) == doctest::Approx(ref).epsilon(1e-9));
    }
    for (double lambda : {1.0, 1.0 + 1e-9, 0.999999, 0.2}) {
      const double ref = birth_chain_last({lambda}, x);
      CHECK(susceptible_to_infected_path(x, lambda) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
  CHECK(susceptible_to_infected_path(2.0, 1.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("floor constant") {
  CHECK(prop_s_constant(1.0) == 1.0 / 64.0);
  CHECK(prop_s_constant(4.0) == doctest::Approx(std::exp(-4.0) / 8.0).epsilon(1e-14));
  CHECK(prop_s_constant(1e-9) < 1e-9);
  for (double a = 0.01; a < 50.0; a *= 1.2) {
    CHECK(prop_s_constant(a) > 0.0);
    CHECK(prop_s_constant(a) <= 1.0 / 64.0);
  }
}

TEST_CASE("conditioned exponential rate") {
  CHECK(conditioned_exponential_rate(1.0, 1.0) == 2.0);
  CHECK(conditioned_exponential_rate(0.3, 1.0) == doctest::Approx(1.3));
  RandomStream s = derive_stream(SeedSpec(32, {}));
  std::vector<double> accepted;
  while (accepted.size() < 100000) {
    const double xi = s.exponential(0.3);
    const double eta = s.exponential(1.0);
    if (xi < eta) accepted.push_back(xi);
  }
  const double rate = conditioned_exponential_rate(0.3, 1.0);
  const double d = stats::ks_statistic(accepted, [rate](double x) { return 1.0 - std::exp(-rate * x); });
  CHECK(d < stats::ks_critical(accepted.size(), 0.001));
}

TEST_CASE("oracle trivial cases") {
  CHECK(exact_mean_survival({0, 1.0, 1.0, Variant::x}).mean_tau == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(exact_mean_survival({0, 1.0, 1.0, Variant::sis}).mean_tau == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(exact_mean_survival({1, 1e-8, 1.0, Variant::x}).mean_tau - 1.0) < 1e-6);
  CHECK(exact_mean_survival({0, 1.0, 1.0, Variant::x}).mean_psi == 0.0);
}

TEST_CASE("oracle matches a hand-enumerated nine-state solve at n = 1") {
  for (auto [lambda, alpha] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{3.0, 0.25}}) {
    // States: 0 (I,0,0) 1 (I,1,0) 2 (I,0,1) 3 (S,1,0) 4 (R,1,0) and absorbing
    // 5 (S,0,0) 6 (R,0,0) 7 (S,0,1) 8 (R,0,1). Rows are -generator.
    Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
    Eigen::Matrix<double, 9, 1> rhs = Eigen::Matrix<double, 9, 1>::Zero();
    a(0, 0) = 1 + lambda; a(0, 6) = -1; a(0, 1) = -lambda;
    a(1, 1) = 2; a(1, 4) = -1; a(1, 2) = -1;
    a(2, 2) = 1 + alpha; a(2, 8) = -1; a(2, 0) = -alpha;
    a(3, 3) = lambda + 1; a(3, 1) = -lambda; a(3, 7) = -1;
    a(4, 4) = alpha + 1; a(4, 3) = -alpha; a(4, 8) = -1;
    for (int k = 5; k < 9; ++k) a(k, k) = 1.0;
    for (int k = 0; k < 5; ++k) rhs(k) = 1.0;
    const Eigen::Matrix<double, 9, 1> h = a.partialPivLu().solve(rhs);
    const auto sol = exact_mean_survival({1, lambda, alpha, Variant::x});
    CHECK(sol.mean_tau == doctest::Approx(h(0)).epsilon(1e-12));
    CHECK(sol.states.size() == 5);
  }
}

namespace {

// Independent dense solve with states in (root, r, i) order.
std::pair<double, double> dense_oracle(const ProcessParams& p) {
  std::map<std::tuple<int, int, int>, int> id;
  std::vector<std::tuple<int, int, int>> states;
  const int n = static_cast<int>(p.n);
  for (int root = 0; root < 3; ++root) {
    if (root == 2 && p.variant == Variant::sis) continue;
    for (int r = 0; r <= (p.variant == Variant::x ? n : 0); ++r)
      for (int i = 0; i + r <= n; ++i) {
        if (root != 1 && i == 0) continue;
        id[{root, i, r}] = static_cast<int>(states.size());
        states.emplace_back(root, i, r);
      }
  }
  const int N = static_cast<int>(states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(N), reinf = Eigen::VectorXd::Zero(N);
  for (int k = 0; k < N; ++k) {
    auto [root, i, r] = states[k];
    auto go = [&](int nroot, int ni, int nr, double rate) {
      if (rate == 0.0) return;
      a(k, k) += rate;
      if (nroot != 1 && ni == 0) return;
      a(k, id.at({nroot, ni, nr})) -= rate;
    };
    const bool leaf_imm = p.variant == Variant::x;
    if (i > 0) go(root, i - 1, leaf_imm ? r + 1 : r, i);
    if (r > 0) go(root, i, r - 1, p.alpha * r);
    if (root == 1) {
      go(p.variant == Variant::sis ? 0 : 2, i, r, 1.0);
      go(1, i + 1, r, p.lambda * (n - i - r));
    } else if (root == 2) {
      go(0, i, r, p.alpha);
    } else {
      go(1, i, r, p.lambda * i);
      reinf(k) = p.lambda * i;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const int start = id.at({1, 0, 0});
  return {lu.solve(one)(start), lu.solve(reinf)(start)};
}

}  // namespace

TEST_CASE("oracle agrees with an independent dense solve") {
  for (Variant v : {Variant::x, Variant::y, Variant::sis}) {
    for (std::uint64_t n : {1u, 2u, 5u, 12u}) {
      for (auto [lambda, alpha] : {std::pair{0.5, 0.5}, std::pair{1.0, 2.0}, std::pair{2.5, 1.0}}) {
        const ProcessParams p{n, lambda, alpha, v};
        const auto sol = exact_mean_survival(p);
        const auto [tau, psi] = dense_oracle(p);
        CHECK(sol.mean_tau == doctest::Approx(tau).epsilon(1e-10));
        CHECK(sol.mean_psi == doctest::Approx(psi).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("oracle mean survival increases with n") {
  for (Variant v : {Variant::x, Variant::y, Variant::sis}) {
    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 10; ++n) {
      const double t = exact_mean_survival({n, 0.5, 1.0, v}).mean_tau;
      CHECK(t > prev);
      prev = t;
    }
  }
}

TEST_CASE("oracle capacity and size limits") {
  CHECK(lumped_state_count({80, 1.0, 1.0, Variant::x}) == 9963);
  CHECK_NOTHROW(exact_mean_survival({80, 0.2, 1.0, Variant::x}));
  CHECK_THROWS_AS(exact_mean_survival({81, 0.2, 1.0, Variant::x}), CapacityError);
  CHECK_NOTHROW(exact_mean_survival({3000, 0.01, 1.0, Variant::y}));
  CHECK_THROWS_AS(exact_mean_survival({4000, 0.01, 1.0, Variant::y}), CapacityError);
}

TEST_CASE("oracle values are positive and exported as CSV") {
  const auto sol = exact_mean_survival({2, 1.0, 1.0, Variant::x});
  for (double t : sol.expected_time) CHECK(t > 0.0);
  std::ostringstream os;
  write_oracle_csv(os, sol);
  const std::string csv = os.str();
  CHECK(csv.rfind("root,infected,recovered,expected_time,expected_psi\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(sol.states.size()) + 1);
}
