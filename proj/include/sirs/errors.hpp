// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sirs {

// A parameter outside its documented domain (non-positive rate, x outside
// (0,1), malformed graph, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request exceeds a documented size cap (oracle state count, engine size).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An event stream that cannot come from a valid trajectory.
class CorruptTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pathwise invariant that must hold in every realization failed. Always an
// implementation bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Too few usable points for a regression.
class InsufficientRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sirs
