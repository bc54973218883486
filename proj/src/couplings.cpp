// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/couplings.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sirs/clocks.hpp"
#include "sirs/errors.hpp"
#include "sirs/graph.hpp"
#include "sirs/simd/kernels.hpp"

namespace sirs {

namespace {

enum class Feed : std::uint8_t { running, round_ended, extinct };

// One process of the coupling. Times fed in are round-relative; the lane adds
// its own round start.
struct Lane {
  ProcessParams params;
  GeneralConfig config;
  RoundTracker tracker;
  double start = 0.0;
  bool done = false;

  Lane(const ProcessParams& p, const Graph& g) : params(p), config(GeneralConfig::initial(g)), tracker(true, true) {
    tracker.on_event({RootEventKind::infection, 0.0, 0});
  }

  std::uint64_t leaves_infected() const noexcept {
    return config.infected - (config.states[0] == VertexState::infected ? 1 : 0);
  }

  Feed feed(const Graph& g, const ClockBundle& bundle, const ClockLayout& layout, const BundleEvent& rel) {
    const BundleEvent abs{start + rel.time, rel.clock};
    const StepEvent step = apply_clock_event(config, g, params, abs);
    if (step.changed && step.vertex == 0) {
      if (step.to == VertexState::infected) {
        tracker.on_event({RootEventKind::infection, abs.time, leaves_infected()});
        start = abs.time;
        return Feed::round_ended;
      }
      tracker.on_event({step.from == VertexState::infected ? RootEventKind::recovery : RootEventKind::deimmunization,
                        abs.time, leaves_infected()});
    }
    if (config.absorbed()) {
      tracker.on_event({RootEventKind::extinction, abs.time, 0});
      if (!tracker.finished()) {
        const double rel_s = bundle.next_time_of(layout.deimmunization(0), rel.time);
        tracker.on_event({RootEventKind::deimmunization, start + rel_s, 0});
      }
      done = true;
      return Feed::extinct;
    }
    return Feed::running;
  }
};

const std::uint8_t* raw(const std::vector<VertexState>& s) { return reinterpret_cast<const std::uint8_t*>(s.data()); }

// Round-relative end of the running round (reinfection or extinction) for a
// process starting from `config`, on a private copy of the bundle.
double dry_run_round_end(GeneralConfig config, const Graph& g, const ProcessParams& params, ClockBundle bundle) {
  for (;;) {
    const BundleEvent ev = bundle.next_event();
    const StepEvent step = apply_clock_event(config, g, params, ev);
    if (step.changed && step.vertex == 0 && step.to == VertexState::infected) return ev.time;
    if (config.absorbed()) return ev.time;
  }
}

void violation(const CouplingOptions& options, const std::string& what) {
  if (options.throw_on_violation) throw ConsistencyError("coupling audit failed: " + what);
}

}  // namespace

CoupledRun run_coupled_xy(const ProcessParams& params, const SeedSpec& seed, const CouplingOptions& options) {
  ProcessParams px = params;
  px.variant = Variant::x;
  px.validate();
  ProcessParams py = px;
  py.variant = Variant::y;
  if (params.n > 100'000'000) throw CapacityError("star too large for the per-vertex engine");
  if (options.round_cap == 0) throw InvalidParameter("round_cap must be positive");

  const Graph g = Graph::star(static_cast<std::uint32_t>(params.n));
  const ClockLayout layout = ClockLayout::of(g);
  const std::vector<double> rates = clock_rates(g, px, true);
  RandomStream audit = derive_stream(seed.child(0));
  Lane x(px, g), y(py, g);
  CoupledRun run;
  const std::size_t V = g.vertex_count();

  auto check_containment = [&]() {
    ++run.containment_checks;
    const std::size_t bad = simd::count_subset_violations(
        std::span(raw(x.config.states), V), std::span(raw(y.config.states), V),
        static_cast<std::uint8_t>(VertexState::infected));
    if (bad != 0) {
      ++run.containment_violations;
      run.containment_ok = false;
    }
  };

  for (std::uint64_t round = 1; !y.done; ++round) {
    if (round > options.round_cap) {
      run.y_capped = true;
      break;
    }
    ClockBundle bundle(derive_key(seed.child(round)), rates);
    if (x.done) {
      // Y alone.
      while (y.feed(g, bundle, layout, bundle.next_event()) == Feed::running) {
      }
      if (y.tracker.records().size() >= run.x_rounds.size()) y.tracker.set_keep(false);
      continue;
    }

    // Shared round: sample interior instants over Y's part of the round.
    const double y_end = dry_run_round_end(y.config, g, py, bundle);
    std::vector<double> samples(options.interior_samples);
    for (double& s : samples) s = audit.uniform() * y_end;
    std::sort(samples.begin(), samples.end());
    std::size_t next_sample = 0;
    check_containment();

    bool x_in = true, y_in = true;
    double x_len = std::numeric_limits<double>::infinity();
    double y_len = std::numeric_limits<double>::infinity();
    Feed x_state = Feed::running, y_state = Feed::running;
    while (x_in || y_in) {
      const BundleEvent ev = bundle.next_event();
      const bool both = x_in && y_in;
      if (both) {
        while (next_sample < samples.size() && samples[next_sample] < ev.time) {
          check_containment();
          ++next_sample;
        }
      }
      const VertexState y_root_before = y.config.states[0];
      if (y_in) {
        y_state = y.feed(g, bundle, layout, ev);
        if (y_state != Feed::running) {
          y_in = false;
          if (y_state == Feed::round_ended) y_len = ev.time;
        }
      }
      if (x_in) {
        x_state = x.feed(g, bundle, layout, ev);
        if (x_state != Feed::running) {
          x_in = false;
          if (x_state == Feed::round_ended) x_len = ev.time;
        }
      }
      // Root boundaries (xi, xi + zeta) and Y's round end.
      if (both && (y.config.states[0] != y_root_before || !y_in)) check_containment();
      if (both && !x_in && y_in && x_state == Feed::round_ended) {
        // X started its next round before Y finished this one.
        run.duration_ok = false;
        violation(options, "X round " + std::to_string(round) + " shorter than Y's");
        break;
      }
    }
    if (!run.duration_ok) break;
    if (x_state == Feed::round_ended) {
      run.x_durations.push_back(x_len);
      run.y_durations.push_back(y_len);
      if (!(y_len <= x_len)) {
        run.duration_ok = false;
        violation(options, "round " + std::to_string(round) + " duration dominance");
      }
    }
    if (x.done) run.x_rounds = x.tracker.records();
  }
  if (!x.done) run.x_rounds = x.tracker.records();

  run.psi_x = x.tracker.psi();
  run.psi_y = y.tracker.psi();
  run.tau_x = x.tracker.extinction_time();
  run.y_rounds = y.tracker.records();
  if (run.y_rounds.size() > run.x_rounds.size()) run.y_rounds.resize(run.x_rounds.size());

  run.psi_ok = run.y_capped || run.psi_x <= run.psi_y;
  if (!run.psi_ok) violation(options, "psi_x > psi_y");
  for (std::size_t i = 0; i < run.x_rounds.size(); ++i) {
    if (i >= run.y_rounds.size() || run.x_rounds[i].I_R > run.y_rounds[i].I_R) {
      run.ir_ok = false;
      violation(options, "|I^R| dominance in round " + std::to_string(i + 1));
      break;
    }
  }
  if (!run.containment_ok) violation(options, "infected-set containment");
  return run;
}

SustainedRun run_sustained(const ProcessParams& params, const SeedSpec& seed, std::uint64_t round_cap) {
  ProcessParams p = params;
  p.variant = Variant::x;
  p.validate();
  if (round_cap == 0) throw InvalidParameter("round_cap must be at least 1");
  const Graph g = Graph::star(static_cast<std::uint32_t>(params.n));
  ClockBundle bundle(derive_key(seed), clock_rates(g, p));
  GeneralConfig c = GeneralConfig::initial(g);
  SustainedRun out;
  out.rounds.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(round_cap, 1'000'000)));

  RoundRecord current;
  current.index = 1;
  bool extinct_seen = false;
  auto leaves_infected = [&] { return c.infected - (c.states[0] == VertexState::infected ? 1 : 0); };
  auto open_round = [&](double t) {
    current = RoundRecord{};
    current.index = out.rounds.size() + 1;
    current.tau = t;
    current.I = leaves_infected();
  };
  auto close_round = [&](bool succeeded) {
    current.succeeded = succeeded;
    out.rounds.push_back(current);
  };
  auto reinfect_root = [&](double t) {
    close_round(false);
    c.states[0] = VertexState::infected;
    ++c.infected;
    if (out.rounds.size() < round_cap) open_round(t);
  };
  auto note_extinction = [&](double t) {
    if (!extinct_seen) {
      extinct_seen = true;
      out.first_extinction = t;
      out.first_failed_round = current.index;
    }
  };

  while (out.rounds.size() < round_cap) {
    const BundleEvent ev = bundle.next_event();
    const StepEvent step = apply_clock_event(c, g, p, ev);
    if (!step.changed) continue;
    ++out.events;
    if (step.vertex == 0) {
      if (step.to == VertexState::infected) {
        close_round(true);
        if (out.rounds.size() < round_cap) open_round(ev.time);
        continue;
      }
      if (step.from == VertexState::infected) {
        current.tau_R = ev.time;
        current.xi = ev.time - current.tau;
        current.I_R = leaves_infected();
      } else {
        current.tau_S = ev.time;
        current.zeta = ev.time - current.tau_R;
        current.I_S = leaves_infected();
        if (c.absorbed()) {
          // Immunity ran out during extinction: artificial reinfection now.
          reinfect_root(ev.time);
          continue;
        }
      }
    }
    if (c.absorbed()) {
      note_extinction(ev.time);
      if (c.states[0] == VertexState::susceptible) reinfect_root(ev.time);
      // Otherwise wait for the root's D clock.
    }
  }
  return out;
}

}  // namespace sirs
