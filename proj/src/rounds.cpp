// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/rounds.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sirs/errors.hpp"
#include "sirs/format.hpp"

namespace sirs {

namespace {

[[noreturn]] void corrupt(const std::string& what, double time) {
  throw CorruptTrajectory(what + " at t=" + format_double(time));
}

}  // namespace

void RoundTracker::close(bool succeeded) {
  current_.succeeded = succeeded;
  if (succeeded) ++psi_;
  if (keep_) records_.push_back(current_);
}

void RoundTracker::on_event(const RootEvent& e) {
  if (!(e.time >= last_time_) || std::isnan(e.time)) corrupt("non-monotone root event", e.time);
  last_time_ = e.time;
  switch (e.kind) {
    case RootEventKind::infection:
      if (phase_ == Phase::idle) {
        if (e.time != 0.0) corrupt("first round must start at time 0", e.time);
      } else if (phase_ == Phase::susceptible) {
        close(true);
      } else {
        corrupt("root infected while not susceptible", e.time);
      }
      ++started_;
      current_ = RoundRecord{};
      current_.index = started_;
      current_.tau = e.time;
      current_.I = e.infected_leaves;
      phase_ = Phase::infected;
      return;
    case RootEventKind::recovery:
      if (phase_ != Phase::infected) corrupt("root recovery outside an infected period", e.time);
      current_.tau_R = e.time;
      current_.xi = e.time - current_.tau;
      current_.I_R = e.infected_leaves;
      if (immune_) {
        phase_ = Phase::immune;
      } else {
        current_.tau_S = e.time;
        current_.zeta = 0.0;
        current_.I_S = e.infected_leaves;
        phase_ = Phase::susceptible;
      }
      return;
    case RootEventKind::deimmunization:
      if (phase_ != Phase::immune && phase_ != Phase::extinct_immune) {
        corrupt("root deimmunization outside an immune period", e.time);
      }
      current_.tau_S = e.time;
      current_.zeta = e.time - current_.tau_R;
      current_.I_S = e.infected_leaves;
      if (phase_ == Phase::extinct_immune) {
        if (e.infected_leaves != 0) corrupt("infected leaves after extinction", e.time);
        close(false);
        phase_ = Phase::done;
      } else {
        phase_ = Phase::susceptible;
      }
      return;
    case RootEventKind::extinction:
      if (e.infected_leaves != 0) corrupt("extinction with infected leaves", e.time);
      extinction_ = e.time;
      if (phase_ == Phase::immune) {
        phase_ = Phase::extinct_immune;
      } else if (phase_ == Phase::susceptible) {
        close(false);
        phase_ = Phase::done;
      } else {
        corrupt("extinction while the root is infected", e.time);
      }
      return;
  }
}

std::vector<RoundRecord> extract_rounds(std::span<const RootEvent> events, bool root_immunity) {
  RoundTracker tracker(true, root_immunity);
  for (const RootEvent& e : events) {
    if (tracker.finished()) corrupt("events after the final round closed", e.time);
    tracker.on_event(e);
  }
  if (!tracker.finished()) throw CorruptTrajectory("trajectory ends before the final round closes");
  return tracker.records();
}

void validate_rounds(std::span<const RoundRecord> records, bool root_immunity) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    const RoundRecord& r = records[k];
    const bool last = k + 1 == records.size();
    const std::string where = "round " + std::to_string(r.index);
    if (r.index != k + 1) throw CorruptTrajectory(where + ": index out of sequence");
    if (k == 0 && r.tau != 0.0) throw CorruptTrajectory(where + ": first round must start at 0");
    if (!(r.tau < r.tau_R)) throw CorruptTrajectory(where + ": tau_R not after tau");
    if (root_immunity ? !(r.tau_R < r.tau_S) : r.tau_R != r.tau_S) {
      throw CorruptTrajectory(where + ": tau_S inconsistent with tau_R");
    }
    if (r.succeeded == last) throw CorruptTrajectory(where + ": only the final round may fail");
    if (!last && !(records[k + 1].tau > r.tau_S)) throw CorruptTrajectory(where + ": next round starts too early");
  }
}

RoundClassification classify_rounds(std::span<const RoundRecord> records, const RoundClassifierConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
  RoundClassification out;
  out.labels.reserve(records.size());
  std::uint64_t run = 0;
  for (const RoundRecord& r : records) {
    if (r.xi > config.epsilon) {
      out.labels.push_back(RoundLabel::good);
      ++out.good;
      if (run > 0) out.bad_chunks.push_back(run);
      run = 0;
    } else {
      out.labels.push_back(RoundLabel::bad);
      ++run;
    }
  }
  if (run > 0) out.bad_chunks.push_back(run);
  return out;
}

void write_rounds_csv(std::ostream& out, std::span<const RoundRecord> records) {
  out << "index,tau_i,xi_i,zeta_i,tau_i_R,tau_i_S,I_i,I_i_R,I_i_S,succeeded\n";
  for (const RoundRecord& r : records) {
    out << r.index << ',' << format_double(r.tau) << ',' << format_double(r.xi) << ',' << format_double(r.zeta)
        << ',' << format_double(r.tau_R) << ',' << format_double(r.tau_S) << ',' << r.I << ',' << r.I_R << ','
        << r.I_S << ',' << (r.succeeded ? "true" : "false") << '\n';
  }
}

}  // namespace sirs
