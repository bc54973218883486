// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sirs/analytics.hpp"
#include "sirs/errors.hpp"
#include "sirs/format.hpp"
#include "sirs/parallel.hpp"

namespace sirs {

void ExperimentSpec::validate() const {
  if (grid.empty()) throw InvalidParameter("experiment grid is empty");
  if (replicas == 0) throw InvalidParameter("replicas must be at least 1");
  if (!(horizon > 0.0)) throw InvalidParameter("horizon must be positive");
  for (const ProcessParams& p : grid) p.validate();
}

namespace {

void require_general_cap(const ProcessParams& p) {
  if (p.n > kGeneralEngineCap) {
    throw CapacityError("per-vertex engine is limited to n <= " + std::to_string(kGeneralEngineCap));
  }
}

std::string describe(const ProcessParams& p) {
  return "n=" + std::to_string(p.n) + " lambda=" + format_double(p.lambda) + " alpha=" + format_double(p.alpha) +
         " variant=" + std::string(to_string(p.variant));
}

}  // namespace

ExperimentResult run_grid(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  RunOptions opt;
  opt.engine = spec.engine;
  opt.horizon = spec.horizon;
  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    const ProcessParams& p = spec.grid[point];
    if (spec.engine == Engine::general) require_general_cap(p);
    std::vector<SurvivalSample> samples(spec.replicas);
    parallel_for(spec.replicas, spec.workers, [&](std::size_t k) {
      samples[k] = run_survival(p, SeedSpec(spec.master_seed, {point, k}), opt).sample;
    });

    PointResult out;
    out.params = p;
    out.replicas = spec.replicas;
    const double floor = p.variant == Variant::sis ? 0.0 : analytics::prop_s_constant(p.alpha);
    std::vector<double> tau, psi;
    tau.reserve(samples.size());
    psi.reserve(samples.size());
    double events = 0.0;
    for (const SurvivalSample& s : samples) {
      events += static_cast<double>(s.events);
      if (s.min_non_immune_fraction >= floor) ++out.floor_passes;
      if (s.censored) {
        ++out.censored;
        continue;
      }
      tau.push_back(s.tau);
      psi.push_back(static_cast<double>(s.psi));
    }
    out.tau = stats::summarize(tau);
    out.psi = stats::summarize(psi);
    out.mean_events = events / static_cast<double>(samples.size());
    out.unreliable = static_cast<double>(out.censored) > kUnreliableCensoredFraction * static_cast<double>(spec.replicas);
    result.points.push_back(std::move(out));
  }
  return result;
}

double scaling_profile(const ProcessParams& p) {
  const double n = static_cast<double>(p.n);
  const double log_n = p.n > 1 ? std::log(n) : 0.0;
  return std::pow(p.lambda * p.lambda * n, p.alpha) / std::pow(p.lambda + 1.0, 2.0 * p.alpha) + log_n;
}

double band_ratio(const ExperimentResult& result, double (*profile)(const ProcessParams&)) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const PointResult& pt : result.points) {
    const double r = pt.tau.mean / profile(pt.params);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (result.points.empty() || !(lo > 0.0)) throw InsufficientRange("band ratio needs positive means");
  return hi / lo;
}

ExponentFit fit_exponent(const ExperimentResult& result, FitMode mode, const FitOptions& options) {
  const std::vector<PointResult>& pts = result.points;
  for (const PointResult& pt : pts) {
    const ProcessParams& first = pts.front().params;
    const bool same = mode == FitMode::vary_lambda_fixed_n ? pt.params.n == first.n : pt.params.lambda == first.lambda;
    if (!same || pt.params.alpha != first.alpha) {
      throw InvalidParameter(mode == FitMode::vary_lambda_fixed_n ? "fit expects a common n and alpha"
                                                                  : "fit expects a common lambda and alpha");
    }
  }
  ExponentFit out;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const ProcessParams& p = pts[k].params;
    const double drive = p.lambda * p.lambda * static_cast<double>(p.n);
    const double log_n = p.n > 1 ? std::log(static_cast<double>(p.n)) : 0.0;
    if (!(drive > 0.0) || !(pts[k].tau.mean > 0.0) || pts[k].tau.count == 0) continue;
    if (std::pow(drive, p.alpha) < options.dominance_factor * log_n) continue;
    out.used.push_back(k);
    x.push_back(std::log(drive));
    y.push_back(std::log(pts[k].tau.mean));
  }
  if (out.used.size() < 3) {
    throw InsufficientRange("only " + std::to_string(out.used.size()) +
                            " grid points pass the dominance filter; at least 3 needed");
  }
  out.fit = stats::ols(x, y);
  return out;
}

stats::Proportion empirical_round_failure(std::uint64_t a, double lambda, double alpha, std::uint64_t trials,
                                          const SeedSpec& seed, unsigned workers) {
  if (a == 0) throw InvalidParameter("a must be at least 1");
  if (trials == 0) throw InvalidParameter("trials must be at least 1");
  // Susceptible leaves never matter before the root is reinfected, so a star
  // with exactly a leaves is enough.
  const ProcessParams p{a, lambda, alpha, Variant::x};
  p.validate();
  std::vector<std::uint8_t> failed(trials);
  parallel_for(trials, workers, [&](std::size_t k) {
    RandomStream stream = derive_stream(seed.child(k));
    StarState s{VertexState::recovered, a, 0, 0.0};
    while (s.root != VertexState::infected && !s.absorbed()) {
      const RateTable table = star_transition_rates(s, p);
      double u = stream.uniform() * table.total();
      const Transition* pick = table.begin();
      for (const Transition* t = table.begin(); t != table.end(); ++t) {
        if (t->rate <= 0.0) continue;
        pick = t;
        if (u < t->rate) break;
        u -= t->rate;
      }
      apply_transition(s, pick->kind, p);
    }
    failed[k] = s.root == VertexState::infected ? 0 : 1;
  });
  std::uint64_t count = 0;
  for (std::uint8_t f : failed) count += f;
  return stats::wilson(count, trials);
}

std::vector<FloorAudit> audit_floor(const ExperimentSpec& spec) {
  ExperimentSpec x = spec;
  x.grid.clear();
  for (const ProcessParams& p : spec.grid) {
    if (p.variant == Variant::x) x.grid.push_back(p);
  }
  std::vector<FloorAudit> out;
  if (x.grid.empty()) return out;
  const ExperimentResult r = run_grid(x);
  for (const PointResult& pt : r.points) {
    FloorAudit f;
    f.params = pt.params;
    f.threshold = analytics::prop_s_constant(pt.params.alpha);
    f.pass = stats::wilson(pt.floor_passes, pt.replicas);
    out.push_back(f);
  }
  return out;
}

CouplingAudit audit_coupling(const ExperimentSpec& spec, const CouplingOptions& options, bool throw_on_failure) {
  spec.validate();
  CouplingOptions quiet = options;
  quiet.throw_on_violation = false;
  CouplingAudit audit;
  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    const ProcessParams& p = spec.grid[point];
    require_general_cap(p);
    std::vector<CoupledSummary> runs(spec.replicas);
    parallel_for(spec.replicas, spec.workers, [&](std::size_t k) {
      const CoupledRun run = run_coupled_xy(p, SeedSpec(spec.master_seed, {point, k}), quiet);
      CoupledSummary& s = runs[k];
      s.point = point;
      s.replica = k;
      s.psi_x = run.psi_x;
      s.psi_y = run.psi_y;
      s.rounds = run.x_rounds.size();
      s.containment_checks = run.containment_checks;
      s.y_capped = run.y_capped;
      s.psi_ok = run.psi_ok;
      s.ir_ok = run.ir_ok;
      s.duration_ok = run.duration_ok;
      s.containment_ok = run.containment_ok;
    });
    audit.runs.insert(audit.runs.end(), runs.begin(), runs.end());
  }
  double sx = 0.0, sy = 0.0;
  for (const CoupledSummary& s : audit.runs) {
    audit.passed += s.passed() ? 1 : 0;
    sx += static_cast<double>(s.psi_x);
    sy += static_cast<double>(s.psi_y);
  }
  audit.mean_psi_x = sx / static_cast<double>(audit.runs.size());
  audit.mean_psi_y = sy / static_cast<double>(audit.runs.size());
  if (throw_on_failure && audit.passed != audit.runs.size()) {
    throw ConsistencyError("coupling audit: " + std::to_string(audit.runs.size() - audit.passed) + " of " +
                           std::to_string(audit.runs.size()) + " runs violated the dominance invariants");
  }
  return audit;
}

std::vector<EngineComparison> compare_engines(const ExperimentSpec& spec, bool throw_on_failure) {
  spec.validate();
  std::vector<EngineComparison> out;
  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    const ProcessParams& p = spec.grid[point];
    require_general_cap(p);
    std::vector<double> lumped(spec.replicas), general(spec.replicas);
    RunOptions lo, go;
    lo.horizon = go.horizon = spec.horizon;
    go.engine = Engine::general;
    parallel_for(2 * spec.replicas, spec.workers, [&](std::size_t j) {
      const std::size_t k = j / 2;
      if (j % 2 == 0) {
        lumped[k] = run_survival(p, SeedSpec(spec.master_seed, {point, 0, k}), lo).sample.tau;
      } else {
        general[k] = run_survival(p, SeedSpec(spec.master_seed, {point, 1, k}), go).sample.tau;
      }
    });
    EngineComparison c;
    c.params = p;
    c.lumped = stats::summarize(lumped);
    c.general = stats::summarize(general);
    const double se = std::hypot(c.lumped.se, c.general.se);
    c.z = se > 0.0 ? std::abs(c.lumped.mean - c.general.mean) / se : 0.0;
    c.ks = stats::ks_statistic(std::move(lumped), std::move(general));
    c.ks_critical = stats::ks_critical(spec.replicas, spec.replicas, 0.001);
    if (throw_on_failure && !c.agree()) {
      throw ConsistencyError("engines diverge at " + describe(p) + ": z=" + format_double(c.z) +
                             " ks=" + format_double(c.ks));
    }
    out.push_back(c);
  }
  return out;
}

std::vector<ResidualAudit> audit_residual(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResidualAudit> out;
  RunOptions opt;
  opt.engine = spec.engine;
  opt.horizon = spec.horizon;
  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    const ProcessParams& p = spec.grid[point];
    if (!p.has_root_immunity()) throw InvalidParameter("residual audit needs a variant with root immunity");
    std::vector<double> residual(spec.replicas);
    std::vector<std::uint8_t> censored(spec.replicas);
    parallel_for(spec.replicas, spec.workers, [&](std::size_t k) {
      const SurvivalRun run = run_survival(p, SeedSpec(spec.master_seed, {point, k}), opt);
      censored[k] = run.sample.censored ? 1 : 0;
      residual[k] = std::max(0.0, run.sample.tau - run.final_round.tau_S);
    });
    std::vector<double> kept;
    for (std::size_t k = 0; k < residual.size(); ++k) {
      if (!censored[k]) kept.push_back(residual[k]);
    }
    ResidualAudit a;
    a.params = p;
    a.residual = stats::summarize(kept);
    a.bound = 2.0 * std::log(static_cast<double>(std::max<std::uint64_t>(p.n, 1)));
    out.push_back(a);
  }
  return out;
}

std::vector<GapAudit> audit_reinfection_gap(const ExperimentSpec& spec, const std::vector<std::uint64_t>& b_values,
                                            std::uint64_t samples) {
  spec.validate();
  if (b_values.empty() || samples == 0) throw InvalidParameter("gap audit needs b values and a sample count");
  std::vector<GapAudit> out;
  RunOptions opt;
  opt.engine = spec.engine;
  opt.horizon = spec.horizon;
  opt.record_rounds = true;
  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    const ProcessParams& p = spec.grid[point];
    if (!p.has_root_immunity()) throw InvalidParameter("gap audit needs a variant with root immunity");
    std::vector<std::vector<double>> gaps(b_values.size());
    auto done = [&] {
      return std::all_of(gaps.begin(), gaps.end(), [&](const auto& g) { return g.size() >= samples; });
    };
    for (std::uint64_t batch = 0; !done(); ++batch) {
      if (batch > 10'000) throw InsufficientRange("gap audit: too few rounds with the requested |I^S| at " + describe(p));
      std::vector<std::vector<std::pair<std::size_t, double>>> found(spec.replicas);
      parallel_for(spec.replicas, spec.workers, [&](std::size_t k) {
        const SurvivalRun run = run_survival(p, SeedSpec(spec.master_seed, {point, batch * spec.replicas + k}), opt);
        for (std::size_t i = 0; i + 1 < run.rounds.size(); ++i) {
          const auto it = std::find(b_values.begin(), b_values.end(), run.rounds[i].I_S);
          if (it == b_values.end()) continue;
          found[k].emplace_back(static_cast<std::size_t>(it - b_values.begin()),
                                run.rounds[i + 1].tau - run.rounds[i].tau_S);
        }
      });
      for (const auto& list : found) {
        for (const auto& [slot, gap] : list) gaps[slot].push_back(gap);
      }
    }
    const double q = p.lambda / (p.lambda + 1.0);
    for (std::size_t j = 0; j < b_values.size(); ++j) {
      const std::uint64_t b = b_values[j];
      std::vector<double>& g = gaps[j];
      g.resize(samples);
      GapAudit a;
      a.params = p;
      a.b = b;
      a.gap = stats::summarize(g);
      // E[1/V; V >= 1] over the binomial, computed with log-space weights.
      double num = 0.0;
      for (std::uint64_t v = 1; v <= b; ++v) {
        const double lw = analytics::log_gamma(static_cast<double>(b) + 1) - analytics::log_gamma(static_cast<double>(v) + 1) -
                          analytics::log_gamma(static_cast<double>(b - v) + 1) + static_cast<double>(v) * std::log(q) +
                          static_cast<double>(b - v) * std::log1p(-q);
        num += std::exp(lw) / static_cast<double>(v);
      }
      const double p_zero = std::exp(static_cast<double>(b) * std::log1p(-q));
      a.exact_mean = num / (1.0 - p_zero) / (p.lambda + 1.0);
      const double rate = (p.lambda + 1.0) * static_cast<double>(b);
      a.lower = 1.0 / rate;
      std::sort(g.begin(), g.end());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double emp = static_cast<double>(i + 1) / static_cast<double>(g.size());
        a.dominance_excess = std::max(a.dominance_excess, emp + std::expm1(-rate * g[i]));
      }
      a.dominance_critical = stats::ks_critical(g.size(), 0.001);
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace sirs
