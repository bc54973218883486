// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sirs {

// One root infection epoch. Counts are infected leaves right after the
// defining transition. For SIS the root has no immune period, so zeta = 0 and
// tau_S == tau_R.
struct RoundRecord {
  std::uint64_t index = 0;  // 1-based
  double tau = 0.0;
  double xi = 0.0;
  double zeta = 0.0;
  double tau_R = 0.0;
  double tau_S = 0.0;
  std::uint64_t I = 0;
  std::uint64_t I_R = 0;
  std::uint64_t I_S = 0;
  bool succeeded = false;
};

enum class RootEventKind : std::uint8_t { infection, recovery, deimmunization, extinction };

// Root-level projection of a star trajectory: every change of the root state
// plus the extinction instant. The deimmunization of the final round may come
// after extinction (its time is read from the root's own clock).
struct RootEvent {
  RootEventKind kind;
  double time;
  std::uint64_t infected_leaves;
};

// Builds round records online from root events in constant memory when
// `keep_records` is false (only the running round, Psi and the last finished
// record are retained).
class RoundTracker {
 public:
  explicit RoundTracker(bool keep_records = true, bool root_immunity = true)
      : keep_(keep_records), immune_(root_immunity) {}

  // Throws CorruptTrajectory on out-of-order times or impossible sequences.
  void on_event(const RootEvent& event);

  // Stops retaining records from now on (Psi keeps counting).
  void set_keep(bool keep) noexcept { keep_ = keep; }

  // True once the failed final round has both extinction and tau_S.
  bool finished() const noexcept { return phase_ == Phase::done; }
  std::uint64_t psi() const noexcept { return psi_; }
  std::uint64_t rounds_started() const noexcept { return started_; }
  double extinction_time() const noexcept { return extinction_; }
  const std::vector<RoundRecord>& records() const noexcept { return records_; }
  // The final failed round (valid once finished()).
  const RoundRecord& last() const noexcept { return current_; }

 private:
  enum class Phase : std::uint8_t { idle, infected, immune, susceptible, extinct_immune, done };
  void close(bool succeeded);

  bool keep_;
  bool immune_;
  Phase phase_ = Phase::idle;
  double last_time_ = 0.0;
  double extinction_ = 0.0;
  std::uint64_t psi_ = 0;
  std::uint64_t started_ = 0;
  RoundRecord current_;
  std::vector<RoundRecord> records_;
};

// Post-hoc extraction of a complete event stream. The stream must start with
// a root infection at time 0 and end with extinction and the final tau_S.
std::vector<RoundRecord> extract_rounds(std::span<const RootEvent> events, bool root_immunity = true);

// Checks the ordering invariants of a finished record sequence; throws
// CorruptTrajectory naming the first offending round.
void validate_rounds(std::span<const RoundRecord> records, bool root_immunity = true);

enum class RoundLabel : std::uint8_t { good, bad };

struct RoundClassifierConfig {
  double epsilon = 0.25;
};

struct RoundClassification {
  std::vector<RoundLabel> labels;
  std::vector<std::uint64_t> bad_chunks;  // lengths of maximal runs of bad rounds
  std::uint64_t good = 0;
};

// good iff xi > epsilon. Throws InvalidParameter unless epsilon is in (0, 1).
RoundClassification classify_rounds(std::span<const RoundRecord> records, const RoundClassifierConfig& config);

// CSV with header index,tau_i,xi_i,zeta_i,tau_i_R,tau_i_S,I_i,I_i_R,I_i_S,succeeded.
void write_rounds_csv(std::ostream& out, std::span<const RoundRecord> records);

}  // namespace sirs
