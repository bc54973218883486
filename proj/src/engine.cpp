// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/engine.hpp"

#include <algorithm>
#include <limits>

#include "sirs/clocks.hpp"
#include "sirs/errors.hpp"
#include "sirs/graph.hpp"

namespace sirs {

std::string_view to_string(Engine e) noexcept { return e == Engine::lumped ? "lumped" : "general"; }

std::optional<Engine> parse_engine(std::string_view text) noexcept {
  if (text == "lumped") return Engine::lumped;
  if (text == "general") return Engine::general;
  return std::nullopt;
}

namespace {

void check_options(const ProcessParams& params, const RunOptions& options) {
  params.validate();
  if (!(options.horizon > 0.0)) throw InvalidParameter("horizon must be positive");
}

double non_immune_fraction(std::uint64_t n, std::uint64_t recovered_leaves) {
  return n == 0 ? 1.0 : static_cast<double>(n - recovered_leaves) / static_cast<double>(n);
}

SurvivalRun finish(RoundTracker& tracker, SurvivalSample sample) {
  SurvivalRun run;
  run.sample = sample;
  if (!sample.censored) {
    run.sample.tau = tracker.extinction_time();
    run.sample.psi = tracker.psi();
    run.final_round = tracker.last();
  } else {
    run.sample.psi = tracker.psi();
  }
  run.rounds = tracker.records();
  return run;
}

SurvivalRun run_lumped(const ProcessParams& p, const SeedSpec& seed, const RunOptions& options) {
  RandomStream stream = derive_stream(seed);
  RoundTracker tracker(options.record_rounds, p.has_root_immunity());
  StarState s;
  SurvivalSample sample;
  std::uint64_t max_recovered = 0;
  tracker.on_event({RootEventKind::infection, 0.0, 0});

  while (!s.absorbed()) {
    const RateTable table = star_transition_rates(s, p);
    const double total = table.total();
    const double t = s.time + stream.exponential(total);
    if (t > options.horizon) {
      sample.censored = true;
      sample.tau = options.horizon;
      break;
    }
    double pick = stream.uniform() * total;
    const Transition* chosen = nullptr;
    for (const Transition& tr : table) {
      if (tr.rate <= 0.0) continue;
      chosen = &tr;
      if (pick < tr.rate) break;
      pick -= tr.rate;
    }
    apply_transition(s, chosen->kind, p);
    s.time = t;
    ++sample.events;
    max_recovered = std::max(max_recovered, s.recovered);
    switch (chosen->kind) {
      case TransitionKind::root_recovery:
        tracker.on_event({RootEventKind::recovery, t, s.infected});
        break;
      case TransitionKind::root_deimmunization:
        tracker.on_event({RootEventKind::deimmunization, t, s.infected});
        break;
      case TransitionKind::root_reinfection:
        tracker.on_event({RootEventKind::infection, t, s.infected});
        break;
      default:
        break;
    }
  }
  if (!sample.censored) {
    tracker.on_event({RootEventKind::extinction, s.time, 0});
    if (!tracker.finished()) {
      // Root still immune: its remaining immune period is memoryless.
      tracker.on_event({RootEventKind::deimmunization, s.time + stream.exponential(p.alpha), 0});
    }
  }
  sample.min_non_immune_fraction = non_immune_fraction(p.n, max_recovered);
  return finish(tracker, sample);
}

SurvivalRun run_general(const ProcessParams& p, const SeedSpec& seed, const RunOptions& options) {
  if (p.n >= std::numeric_limits<std::uint32_t>::max() / 4) throw CapacityError("star too large for the general engine");
  const Graph g = Graph::star(static_cast<std::uint32_t>(p.n));
  const ClockLayout layout = ClockLayout::of(g);
  ClockBundle bundle(derive_key(seed), clock_rates(g, p));
  GeneralConfig c = GeneralConfig::initial(g);
  RoundTracker tracker(options.record_rounds, p.has_root_immunity());
  SurvivalSample sample;
  std::uint64_t max_recovered = 0;
  tracker.on_event({RootEventKind::infection, 0.0, 0});

  while (!c.absorbed()) {
    const BundleEvent ev = bundle.next_event();
    if (ev.time > options.horizon) {
      sample.censored = true;
      sample.tau = options.horizon;
      break;
    }
    const StepEvent step = apply_clock_event(c, g, p, ev);
    if (!step.changed) continue;
    ++sample.events;
    const bool root_infected = c.states[0] == VertexState::infected;
    const bool root_recovered = c.states[0] == VertexState::recovered;
    const std::uint64_t leaves_infected = c.infected - (root_infected ? 1 : 0);
    max_recovered = std::max<std::uint64_t>(max_recovered, c.recovered - (root_recovered ? 1 : 0));
    if (step.vertex != 0) continue;
    if (step.to == VertexState::infected) {
      tracker.on_event({RootEventKind::infection, ev.time, leaves_infected});
    } else if (step.from == VertexState::infected) {
      tracker.on_event({RootEventKind::recovery, ev.time, leaves_infected});
    } else {
      tracker.on_event({RootEventKind::deimmunization, ev.time, leaves_infected});
    }
  }
  if (!sample.censored) {
    tracker.on_event({RootEventKind::extinction, c.time, 0});
    if (!tracker.finished()) {
      tracker.on_event({RootEventKind::deimmunization, bundle.next_time_of(layout.deimmunization(0), c.time), 0});
    }
  }
  sample.min_non_immune_fraction = non_immune_fraction(p.n, max_recovered);
  return finish(tracker, sample);
}

}  // namespace

SurvivalRun run_survival(const ProcessParams& params, const SeedSpec& seed, const RunOptions& options) {
  check_options(params, options);
  return options.engine == Engine::lumped ? run_lumped(params, seed, options) : run_general(params, seed, options);
}

}  // namespace sirs
