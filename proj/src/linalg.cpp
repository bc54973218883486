// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirs/errors.hpp"
#include "sirs/simd/kernels.hpp"

namespace sirs {

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(n * width_, 0.0), extent_(n), pivot_(n) {
  for (std::size_t j = 0; j < n_; ++j) extent_[j] = std::min(n_ - 1, j + ku_);
}

void BandedLU::add(std::size_t row, std::size_t col, double value) {
  if (row >= n_ || col >= n_ || col + kl_ < row || col > row + ku_) {
    throw InvalidParameter("entry (" + std::to_string(row) + ", " + std::to_string(col) + ") outside the band");
  }
  at(row, col) += value;
}

void BandedLU::factorize() {
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last = std::min(n_ - 1, k + kl_);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t j = k + 1; j <= last; ++j) {
      if (std::abs(at(j, k)) > best) {
        best = std::abs(at(j, k));
        p = j;
      }
    }
    if (best == 0.0) throw ConsistencyError("singular matrix at column " + std::to_string(k));
    pivot_[k] = p;
    if (p != k) {
      const std::size_t hi = std::max(extent_[k], extent_[p]);
      for (std::size_t c = k; c <= hi; ++c) std::swap(at(k, c), at(p, c));
      std::swap(extent_[k], extent_[p]);
    }
    const double diag = at(k, k);
    const std::size_t hi = extent_[k];
    const std::size_t len = hi - k;
    for (std::size_t j = k + 1; j <= last; ++j) {
      const double a = at(j, k);
      if (a == 0.0) continue;
      const double l = a / diag;
      at(j, k) = l;
      if (len > 0) {
        simd::axpy(-l, std::span<const double>(&at(k, k + 1), len), std::span<double>(&at(j, k + 1), len));
      }
      extent_[j] = std::max(extent_[j], hi);
    }
  }
  factorized_ = true;
}

void BandedLU::solve(std::span<double> b) const {
  if (!factorized_) throw ConsistencyError("solve before factorize");
  if (b.size() != n_) throw InvalidParameter("right-hand side size mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
    const std::size_t last = std::min(n_ - 1, k + kl_);
    for (std::size_t j = k + 1; j <= last; ++j) b[j] -= at(j, k) * b[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c <= extent_[k]; ++c) s -= at(k, c) * b[c];
    b[k] = s / at(k, k);
  }
}

}  // namespace sirs
