// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sirs {

// Square band matrix with kl sub- and ku super-diagonals, factorized in place
// by Gaussian elimination with partial pivoting. Row j stores columns
// [j - kl, j + kl + ku]; the extra kl columns absorb fill from row swaps.
class BandedLU {
 public:
  BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const noexcept { return n_; }
  // Accumulates into entry (row, col); throws InvalidParameter outside the band.
  void add(std::size_t row, std::size_t col, double value);

  // Throws ConsistencyError on a zero pivot.
  void factorize();
  // Solves A x = b in place. Requires factorize().
  void solve(std::span<double> b) const;

 private:
  double& at(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col + kl_ - row]; }
  double at(std::size_t row, std::size_t col) const noexcept { return data_[row * width_ + col + kl_ - row]; }

  std::size_t n_, kl_, ku_, width_;
  std::vector<double> data_;
  std::vector<std::size_t> extent_;  // last possibly nonzero column per row
  std::vector<std::size_t> pivot_;
  bool factorized_ = false;
};

}  // namespace sirs
