// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "sirs/simd/kernels.hpp"

namespace sirs {

// Identity of one Poisson clock inside a bundle. The numeric value is also
// the tie-breaking order when two clocks report the same time.
struct ClockId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ClockId&, const ClockId&) = default;
};

struct BundleEvent {
  double time = std::numeric_limits<double>::infinity();
  ClockId clock;
};

// A family of independent homogeneous Poisson processes. Clock c's k-th gap
// comes from Philox counter (c, k, clocks-domain) under the bundle key, so the
// realization of every clock is fixed by (key, c) alone: two bundles built
// from the same key and rates replay identical events no matter who consumes
// them or in which order.
//
// Rates may be zero; such clocks never fire.
class ClockBundle {
 public:
  ClockBundle(simd::PhiloxKey key, std::vector<double> rates, double origin = 0.0);

  std::size_t size() const noexcept { return rates_.size(); }
  double rate(ClockId id) const { return rates_.at(id.value); }
  double origin() const noexcept { return origin_; }

  // Earliest pending event across all clocks (time = +inf if every rate is 0).
  BundleEvent peek() const noexcept;

  // Removes and returns the earliest event with time strictly greater than
  // `after`, discarding earlier ones.
  BundleEvent next_event(double after = -std::numeric_limits<double>::infinity());

  // First event time of one clock strictly after `after`, without consuming
  // anything. Used to read the remaining immune period of the root once a
  // trajectory has been absorbed.
  double next_time_of(ClockId id, double after) const;

 private:
  double gap(std::uint32_t id, std::uint64_t draw) const;
  void advance_top();
  void sift_down(std::size_t pos) noexcept;
  bool before(std::uint32_t a, std::uint32_t b) const noexcept {
    return next_[a] < next_[b] || (next_[a] == next_[b] && a < b);
  }

  simd::PhiloxKey key_;
  std::vector<double> rates_;
  double origin_;
  std::vector<double> next_;          // next event time per clock
  std::vector<std::uint64_t> drawn_;  // gaps consumed per clock
  std::vector<std::uint32_t> heap_;   // active clocks, min-heap on (next_, id)
};

}  // namespace sirs
