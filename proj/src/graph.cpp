// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/graph.hpp"

#include <algorithm>
#include <string>

#include "sirs/errors.hpp"

namespace sirs {

Graph::Graph(std::uint32_t vertices, std::vector<Edge> edges) : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices_ == 0) throw InvalidParameter("graph needs at least one vertex");
  if (edges_.size() > (std::uint64_t{1} << 30)) throw CapacityError("too many edges");
  std::vector<Edge> seen;
  seen.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (e.first >= vertices_ || e.second >= vertices_) {
      throw InvalidParameter("edge endpoint out of range: " + std::to_string(e.first) + "-" + std::to_string(e.second));
    }
    if (e.first == e.second) throw InvalidParameter("self-loop at vertex " + std::to_string(e.first));
    seen.emplace_back(std::min(e.first, e.second), std::max(e.first, e.second));
  }
  std::sort(seen.begin(), seen.end());
  const auto dup = std::adjacent_find(seen.begin(), seen.end());
  if (dup != seen.end()) {
    throw InvalidParameter("duplicate edge " + std::to_string(dup->first) + "-" + std::to_string(dup->second));
  }
}

Graph Graph::star(std::uint32_t leaves) {
  std::vector<Edge> edges;
  edges.reserve(leaves);
  for (std::uint32_t v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, std::move(edges));
}

ClockLayout ClockLayout::of(const Graph& g) {
  return {g.vertex_count(), static_cast<std::uint32_t>(2 * g.edge_count())};
}

std::vector<double> clock_rates(const Graph& g, const ProcessParams& params, bool all_deimmunization) {
  const ClockLayout layout = ClockLayout::of(g);
  std::vector<double> rates(layout.size(), 0.0);
  for (std::uint32_t v = 0; v < layout.vertices; ++v) {
    rates[layout.recovery(v).value] = 1.0;
    const bool immune = all_deimmunization || params.variant == Variant::x ||
                        (params.variant == Variant::y && v == 0);
    rates[layout.deimmunization(v).value] = immune ? params.alpha : 0.0;
  }
  for (std::uint32_t d = 0; d < layout.directed_edges; ++d) rates[layout.infection(d).value] = params.lambda;
  return rates;
}

GeneralConfig GeneralConfig::initial(const Graph& g) {
  GeneralConfig c;
  c.states.assign(g.vertex_count(), VertexState::susceptible);
  c.states[0] = VertexState::infected;
  c.infected = 1;
  return c;
}

StepEvent apply_clock_event(GeneralConfig& c, const Graph& g, const ProcessParams& params, const BundleEvent& event) {
  StepEvent out;
  out.clock = event;
  c.time = event.time;
  const std::uint32_t V = g.vertex_count();
  const std::uint32_t id = event.clock.value;
  if (id < V) {
    out.vertex = id;
    VertexState& s = c.states[id];
    if (s != VertexState::infected) return out;
    const bool immune = params.variant == Variant::x || (params.variant == Variant::y && id == 0);
    out.from = s;
    s = immune ? VertexState::recovered : VertexState::susceptible;
    out.to = s;
    --c.infected;
    if (immune) ++c.recovered;
    out.changed = true;
    return out;
  }
  if (id < 2 * V) {
    const std::uint32_t v = id - V;
    out.vertex = v;
    VertexState& s = c.states[v];
    if (s != VertexState::recovered) return out;
    out.from = s;
    s = VertexState::susceptible;
    out.to = s;
    --c.recovered;
    out.changed = true;
    return out;
  }
  const std::uint32_t d = id - 2 * V;
  const std::uint32_t u = g.source(d);
  const std::uint32_t v = g.target(d);
  out.vertex = v;
  out.infector = u;
  if (c.states[u] != VertexState::infected || c.states[v] != VertexState::susceptible) return out;
  out.from = VertexState::susceptible;
  c.states[v] = VertexState::infected;
  out.to = VertexState::infected;
  ++c.infected;
  out.changed = true;
  return out;
}

StepEvent step_general(GeneralConfig& c, const Graph& g, const ProcessParams& params, ClockBundle& bundle) {
  if (c.absorbed()) throw InvalidParameter("step_general called on an absorbed configuration");
  return apply_clock_event(c, g, params, bundle.next_event());
}

}  // namespace sirs
