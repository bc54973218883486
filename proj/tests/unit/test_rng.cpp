// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sirs/errors.hpp"
#include "sirs/rng.hpp"
#include "sirs/stats.hpp"

using namespace sirs;

TEST_CASE("same seed reproduces the first 1000 draws") {
  RandomStream a = derive_stream(SeedSpec(2026, {3, 1}));
  RandomStream b = derive_stream(SeedSpec(2026, {3, 1}));
  for (int k = 0; k < 1000; ++k) REQUIRE(a.next_u64() == b.next_u64());
  CHECK(a.draws() == 1000);
}

TEST_CASE("distinct paths give distinct streams") {
  RandomStream a = derive_stream(SeedSpec(2026, {0}));
  RandomStream b = derive_stream(SeedSpec(2026, {1}));
  int same = 0;
  for (int k = 0; k < 1000; ++k) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
  // Path length is part of the key: (0) and (0, 0) differ, as do () and (0).
  CHECK_FALSE(derive_key(SeedSpec(5, {0})) == derive_key(SeedSpec(5, {0, 0})));
  CHECK_FALSE(derive_key(SeedSpec(5, {})) == derive_key(SeedSpec(5, {0})));
  CHECK_FALSE(derive_key(SeedSpec(5, {1, 2})) == derive_key(SeedSpec(5, {2, 1})));
}

TEST_CASE("stream path depth is capped") {
  CHECK_NOTHROW(derive_key(SeedSpec(1, {1, 2, 3, 4})));
  CHECK_THROWS_AS(derive_key(SeedSpec(1, {1, 2, 3, 4, 5})), InvalidParameter);
}

TEST_CASE("uniform mean within 4 sigma over 1e6 draws") {
  RandomStream s = derive_stream(SeedSpec(7, {}));
  const int n = 1'000'000;
  double sum = 0.0;
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = s.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("Exp(1) mean within 4 sigma over 1e6 samples") {
  RandomStream s = derive_stream(SeedSpec(8, {}));
  const int n = 1'000'000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += sample_exponential(s, 1.0);
  CHECK(std::abs(sum / n - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("exponential scaling under an identical stream") {
  RandomStream a = derive_stream(SeedSpec(9, {4}));
  RandomStream b = derive_stream(SeedSpec(9, {4}));
  for (int k = 0; k < 1000; ++k) REQUIRE(a.exponential(2.0) == b.exponential(1.0) / 2.0);
}

TEST_CASE("non-positive rates are rejected") {
  RandomStream s = derive_stream(SeedSpec(1, {}));
  CHECK_THROWS_AS(s.exponential(0.0), InvalidParameter);
  CHECK_THROWS_AS(s.exponential(-1.0), InvalidParameter);
  CHECK_THROWS_AS(s.exponential(std::nan("")), InvalidParameter);
}

TEST_CASE("minimum of Exp(1) and Exp(0.5) is Exp(1.5)") {
  RandomStream s = derive_stream(SeedSpec(10, {}));
  const std::size_t n = 100'000;
  std::vector<double> m(n);
  for (auto& x : m) {
    const double a = s.exponential(1.0);
    const double b = s.exponential(0.5);
    x = std::min(a, b);
  }
  const double d = stats::ks_statistic(m, [](double x) { return 1.0 - std::exp(-1.5 * x); });
  CHECK(d < 0.01);
  CHECK(d < stats::ks_critical(n, 0.001));
}

TEST_CASE("stream stays reproducible across refill boundaries") {
  RandomStream a = derive_stream(SeedSpec(3, {1}));
  std::vector<std::uint64_t> first;
  for (int k = 0; k < 200; ++k) first.push_back(a.next_u64());
  RandomStream b = derive_stream(SeedSpec(3, {1}));
  for (int k = 0; k < 200; ++k) CHECK(b.next_u64() == first[k]);
}
