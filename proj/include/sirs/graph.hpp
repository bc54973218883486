// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sirs/clocks.hpp"
#include "sirs/process.hpp"

namespace sirs {

// Simple undirected graph. Vertex 0 plays the root in the Y variant (the only
// vertex that gains immunity there).
class Graph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  // Throws InvalidParameter on self-loops, duplicate edges or endpoints out of
  // range.
  Graph(std::uint32_t vertices, std::vector<Edge> edges);

  // Root 0, leaves 1..n, edge k joins 0 and k+1.
  static Graph star(std::uint32_t leaves);

  std::uint32_t vertex_count() const noexcept { return vertices_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(std::size_t k) const { return edges_.at(k); }

  // Directed edge 2k runs first -> second of edge k, 2k+1 the reverse.
  std::uint32_t source(std::size_t directed) const noexcept {
    const Edge& e = edges_[directed >> 1];
    return (directed & 1) ? e.second : e.first;
  }
  std::uint32_t target(std::size_t directed) const noexcept {
    const Edge& e = edges_[directed >> 1];
    return (directed & 1) ? e.first : e.second;
  }

 private:
  std::uint32_t vertices_;
  std::vector<Edge> edges_;
};

// Clock layout of the graphical representation over V vertices and E edges:
// recovery Q_v at [0, V), deimmunization D_v at [V, 2V), infection along
// directed edge d at 2V + d.
struct ClockLayout {
  std::uint32_t vertices;
  std::uint32_t directed_edges;

  static ClockLayout of(const Graph& g);
  std::uint32_t size() const noexcept { return 2 * vertices + directed_edges; }
  ClockId recovery(std::uint32_t v) const noexcept { return {v}; }
  ClockId deimmunization(std::uint32_t v) const noexcept { return {vertices + v}; }
  ClockId infection(std::uint32_t directed) const noexcept { return {2 * vertices + directed}; }
};

// Rates for every clock. D_v is live only where v can hold immunity under the
// variant (all vertices for X, vertex 0 for Y, none for SIS) unless
// `all_deimmunization` forces alpha everywhere, as the shared coupling bundle
// needs.
std::vector<double> clock_rates(const Graph& g, const ProcessParams& params, bool all_deimmunization = false);

struct GeneralConfig {
  std::vector<VertexState> states;
  double time = 0.0;
  std::uint64_t infected = 0;
  std::uint64_t recovered = 0;

  // Vertex 0 infected, the rest susceptible.
  static GeneralConfig initial(const Graph& g);
  bool absorbed() const noexcept { return infected == 0; }
};

struct StepEvent {
  BundleEvent clock;
  std::uint32_t vertex = 0;  // vertex whose state changed (or clock owner)
  VertexState from = VertexState::susceptible;
  VertexState to = VertexState::susceptible;
  std::uint32_t infector = 0;  // source of an infection
  bool changed = false;
};

// Applies one clock mark at `event.time`: Q_v recovers an infected v, D_v makes
// a recovered v susceptible, H along u->v infects a susceptible v when u is
// infected. Any other mark leaves the states alone. Advances config.time.
StepEvent apply_clock_event(GeneralConfig& config, const Graph& g, const ProcessParams& params,
                            const BundleEvent& event);

// Draws the next bundle event and applies it.
StepEvent step_general(GeneralConfig& config, const Graph& g, const ProcessParams& params, ClockBundle& bundle);

}  // namespace sirs
