// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/clocks.hpp"

#include <cmath>
#include <span>
#include <string>

#include "sirs/errors.hpp"
#include "sirs/rng.hpp"

namespace sirs {

namespace {

constexpr std::uint32_t kClockDomain = static_cast<std::uint32_t>(CounterDomain::clocks);

double strictly_after(double previous, double candidate) noexcept {
  return candidate > previous ? candidate : std::nextafter(previous, std::numeric_limits<double>::infinity());
}

}  // namespace

ClockBundle::ClockBundle(simd::PhiloxKey key, std::vector<double> rates, double origin)
    : key_(key), rates_(std::move(rates)), origin_(origin) {
  const std::size_t count = rates_.size();
  if (count >= (std::size_t{1} << 32)) throw CapacityError("clock bundle too large");
  for (double r : rates_) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw InvalidParameter("clock rates must be finite and non-negative, got " + std::to_string(r));
    }
  }
  next_.assign(count, std::numeric_limits<double>::infinity());
  drawn_.assign(count, 0);

  // First gaps of every clock in one batch: counters (c, 0, 0, domain).
  std::vector<simd::PhiloxBlock> first(count);
  simd::philox_fill(key_, {0u, 0u, 0u, kClockDomain}, first);
  heap_.reserve(count);
  for (std::uint32_t c = 0; c < count; ++c) {
    if (rates_[c] == 0.0) continue;
    const std::uint64_t bits = static_cast<std::uint64_t>(first[c][0]) | (static_cast<std::uint64_t>(first[c][1]) << 32);
    next_[c] = strictly_after(origin_, origin_ + -std::log(bits_to_open_unit(bits)) / rates_[c]);
    drawn_[c] = 1;
    heap_.push_back(c);
  }
  for (std::size_t i = heap_.size() / 2; i-- > 0;) sift_down(i);
}

double ClockBundle::gap(std::uint32_t id, std::uint64_t draw) const {
  const simd::PhiloxBlock out = simd::philox4x32(
      key_, {id, static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32), kClockDomain});
  const std::uint64_t bits = static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
  return -std::log(bits_to_open_unit(bits)) / rates_[id];
}

BundleEvent ClockBundle::peek() const noexcept {
  if (heap_.empty()) return {};
  return {next_[heap_[0]], ClockId{heap_[0]}};
}

void ClockBundle::advance_top() {
  const std::uint32_t c = heap_[0];
  next_[c] = strictly_after(next_[c], next_[c] + gap(c, drawn_[c]));
  ++drawn_[c];
  sift_down(0);
}

void ClockBundle::sift_down(std::size_t pos) noexcept {
  const std::size_t n = heap_.size();
  const std::uint32_t item = heap_[pos];
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
    if (!before(heap_[child], item)) break;
    heap_[pos] = heap_[child];
    pos = child;
  }
  heap_[pos] = item;
}

BundleEvent ClockBundle::next_event(double after) {
  if (heap_.empty()) return {};
  while (next_[heap_[0]] <= after) advance_top();
  const BundleEvent event{next_[heap_[0]], ClockId{heap_[0]}};
  advance_top();
  return event;
}

double ClockBundle::next_time_of(ClockId id, double after) const {
  const std::uint32_t c = id.value;
  if (c >= rates_.size()) throw InvalidParameter("unknown clock id");
  if (rates_[c] == 0.0) return std::numeric_limits<double>::infinity();
  double t = next_[c];
  std::uint64_t k = drawn_[c];
  while (t <= after) {
    t = strictly_after(t, t + gap(c, k));
    ++k;
  }
  return t;
}

}  // namespace sirs
