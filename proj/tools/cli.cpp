// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sirs/analytics.hpp"
#include "sirs/config.hpp"
#include "sirs/errors.hpp"
#include "sirs/experiments.hpp"
#include "sirs/report.hpp"
#include "sirs/rounds.hpp"

namespace sirs {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kOutEnv = "SIRS_STAR_OUT";
constexpr const char* kDefaultOut = "sirs-star-out";

fs::path resolve_out(const std::string& flag, const RunConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output.empty()) return c.output;
  if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') return env;
  return kDefaultOut;
}

void require_general_cap(const RunConfig& c) {
  if (c.engine != Engine::general) return;
  for (std::uint64_t n : c.grid.n) {
    if (n > kGeneralEngineCap) {
      throw CapacityError("the per-vertex engine is documented for n <= " + std::to_string(kGeneralEngineCap) +
                          "; use --engine lumped for n = " + std::to_string(n));
    }
  }
}

json point_json(const PointResult& p) { return to_json(p); }

// ---------------------------------------------------------------- simulate

int do_simulate(const RunConfig& c, const json& options, OutputSet* files, std::ostream& out) {
  require_general_cap(c);
  const ExperimentSpec spec = c.experiment();
  const ExperimentResult r = run_grid(spec);
  json summary = {{"command", "simulate"},
                  {"engine", std::string(to_string(c.engine))},
                  {"seed", c.seed},
                  {"horizon", c.horizon}};
  summary.update(point_json(r.points.at(0)));
  out << summary.dump(2) << '\n';
  if (files != nullptr) {
    files->write_json("summary.json", summary);
    if (options.value("rounds", false)) {
      RunOptions opt;
      opt.engine = c.engine;
      opt.horizon = c.horizon;
      opt.record_rounds = true;
      const SurvivalRun run = run_survival(spec.grid[0], SeedSpec(c.seed, {0, 0}), opt);
      std::ofstream csv = files->open("rounds.csv");
      write_rounds_csv(csv, run.rounds);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

double log_n_profile(const ProcessParams& p) { return std::log(static_cast<double>(std::max<std::uint64_t>(p.n, 2))); }

int do_sweep(const RunConfig& c, OutputSet& files, std::ostream& out) {
  require_general_cap(c);
  const ExperimentResult r = run_grid(c.experiment());
  {
    std::ofstream csv = files.open("points.csv");
    write_points_csv(csv, r);
  }
  bool pass = true;
  json points = json::array();
  for (const PointResult& p : r.points) points.push_back(point_json(p));
  json result = {{"points", points}};
  if (c.fit.enabled && c.fit.exponent) {
    json fit = {{"mode", c.fit.mode == FitMode::vary_lambda_fixed_n ? "vary_lambda_fixed_n" : "vary_n_fixed_lambda"},
                {"dominance_factor", c.fit.dominance_factor}};
    try {
      const ExponentFit f = fit_exponent(r, c.fit.mode, {c.fit.dominance_factor});
      fit["slope"] = f.fit.slope;
      fit["intercept"] = f.fit.intercept;
      fit["r_squared"] = f.fit.r_squared;
      fit["used"] = f.used;
      bool ok = true;
      if (c.fit.slope_min) ok = ok && f.fit.slope >= *c.fit.slope_min;
      if (c.fit.slope_max) ok = ok && f.fit.slope <= *c.fit.slope_max;
      if (c.fit.slope_min || c.fit.slope_max) fit["pass"] = ok;
      pass = pass && ok;
    } catch (const InsufficientRange& e) {
      fit["error"] = e.what();
      pass = false;
    }
    result["fit"] = fit;
  }
  if (c.fit.enabled && c.fit.band_max) {
    const bool scaling = c.fit.profile == BandProfile::scaling;
    const double ratio = band_ratio(r, scaling ? scaling_profile : log_n_profile);
    result["band"] = {{"profile", scaling ? "scaling" : "log_n"},
                      {"ratio", ratio},
                      {"max", *c.fit.band_max},
                      {"pass", ratio <= *c.fit.band_max}};
    pass = pass && ratio <= *c.fit.band_max;
  }
  result["pass"] = pass;
  files.write_json("result.json", result);
  out << result.dump(2) << '\n';
  return pass ? kExitOk : kExitAudit;
}

// ---------------------------------------------------------------- oracle

int do_oracle(const RunConfig& c, OutputSet& files, std::ostream& out) {
  const std::vector<ProcessParams> grid = c.grid.expand();
  json list = json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const analytics::OracleSolution sol = analytics::exact_mean_survival(grid[k]);
    json entry = {{"params", to_json(grid[k])},
                  {"states", sol.states.size()},
                  {"mean_tau", sol.mean_tau},
                  {"mean_psi", sol.mean_psi}};
    if (c.oracle.states) {
      const std::string name = "oracle_" + std::to_string(k) + ".csv";
      std::ofstream csv = files.open(name);
      analytics::write_oracle_csv(csv, sol);
      entry["csv"] = name;
    }
    list.push_back(entry);
  }
  const json result = {{"points", list}};
  files.write_json("oracle.json", result);
  out << result.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- audits

json coupled_line(const CoupledSummary& s) {
  return {{"point", s.point},
          {"replica", s.replica},
          {"psi_x", s.psi_x},
          {"psi_y", s.psi_y},
          {"rounds", s.rounds},
          {"containment_checks", s.containment_checks},
          {"y_capped", s.y_capped},
          {"psi_ok", s.psi_ok},
          {"ir_ok", s.ir_ok},
          {"duration_ok", s.duration_ok},
          {"containment_ok", s.containment_ok},
          {"passed", s.passed()}};
}

json coupling_section(const RunConfig& c, OutputSet& files, const std::string& lines_name, bool& pass) {
  const CouplingAudit a = audit_coupling(c.experiment(), c.coupled, false);
  {
    std::ofstream jl = files.open(lines_name);
    for (const CoupledSummary& s : a.runs) jl << coupled_line(s).dump() << '\n';
  }
  std::uint64_t rounds = 0, checks = 0;
  for (const CoupledSummary& s : a.runs) {
    rounds += s.rounds;
    checks += s.containment_checks;
  }
  const bool ok = a.passed == a.runs.size();
  pass = pass && ok;
  return {{"runs", a.runs.size()},   {"passed", a.passed},         {"pass_rate", a.pass_rate()},
          {"mean_psi_x", a.mean_psi_x}, {"mean_psi_y", a.mean_psi_y}, {"rounds_audited", rounds},
          {"containment_checks", checks}, {"pass", ok}};
}

int do_audit(const RunConfig& c, OutputSet& files, std::ostream& out) {
  const ExperimentSpec spec = c.experiment();
  const AuditConfig& a = c.audit;
  bool pass = true;
  json result = json::object();
  if (a.toggles.coupling) result["coupling"] = coupling_section(c, files, "coupling.jsonl", pass);
  if (a.toggles.floor) {
    json list = json::array();
    for (const FloorAudit& f : audit_floor(spec)) {
      json e = {{"params", to_json(f.params)}, {"threshold", f.threshold}, {"pass_rate", to_json(f.pass)}};
      if (a.floor_min) {
        e["required"] = *a.floor_min;
        e["pass"] = f.pass.estimate >= *a.floor_min;
        pass = pass && f.pass.estimate >= *a.floor_min;
      }
      list.push_back(e);
    }
    result["floor"] = list;
  }
  if (a.toggles.residual) {
    json list = json::array();
    for (const ResidualAudit& r : audit_residual(spec)) {
      list.push_back({{"params", to_json(r.params)},
                      {"residual", to_json(r.residual)},
                      {"bound", r.bound},
                      {"pass", r.pass()}});
      pass = pass && r.pass();
    }
    result["residual"] = list;
  }
  if (a.toggles.reinfection_gap) {
    json list = json::array();
    for (const GapAudit& g : audit_reinfection_gap(spec, a.gap_b, a.gap_samples)) {
      list.push_back({{"params", to_json(g.params)},
                      {"b", g.b},
                      {"gap", to_json(g.gap)},
                      {"exact_mean", g.exact_mean},
                      {"lower", g.lower},
                      {"dominance_excess", g.dominance_excess},
                      {"dominance_critical", g.dominance_critical},
                      {"pass", g.pass()}});
      pass = pass && g.pass();
    }
    result["reinfection_gap"] = list;
  }
  if (a.engines) {
    json list = json::array();
    for (const EngineComparison& e : compare_engines(spec, false)) {
      list.push_back({{"params", to_json(e.params)},
                      {"lumped", to_json(e.lumped)},
                      {"general", to_json(e.general)},
                      {"z", e.z},
                      {"ks", e.ks},
                      {"ks_critical", e.ks_critical},
                      {"pass", e.agree()}});
      pass = pass && e.agree();
    }
    result["engines"] = list;
  }
  if (a.round_failure) {
    json list = json::array();
    const RoundFailureConfig& g = a.round_failure_grid;
    std::uint64_t cell = 0;
    for (std::uint64_t ai : g.a) {
      for (double l : g.lambda) {
        for (double al : g.alpha) {
          const stats::Proportion f =
              empirical_round_failure(ai, l, al, g.trials, SeedSpec(c.seed, {cell++}), c.workers);
          const double exact = analytics::round_failure_prob(ai, l, al);
          const bool ok = f.low <= exact && exact <= f.high;
          list.push_back({{"a", ai}, {"lambda", l}, {"alpha", al}, {"frequency", to_json(f)}, {"exact", exact},
                          {"pass", ok}});
          pass = pass && ok;
        }
      }
    }
    result["round_failure"] = list;
  }
  result["pass"] = pass;
  files.write_json("audit.json", result);
  out << result.dump(2) << '\n';
  return pass ? kExitOk : kExitAudit;
}

int do_coupled(const RunConfig& c, OutputSet& files, std::ostream& out) {
  bool pass = true;
  const json summary = coupling_section(c, files, "coupled.jsonl", pass);
  files.write_json("coupled.json", summary);
  out << summary.dump(2) << '\n';
  return pass ? kExitOk : kExitAudit;
}

// Runs one recorded command. `files` may be null only for simulate.
int execute(const std::string& command, const RunConfig& c, const json& options, OutputSet* files,
            std::ostream& out) {
  if (command == "simulate") return do_simulate(c, options, files, out);
  if (files == nullptr) throw std::logic_error("command needs an output directory");
  if (command == "sweep") return do_sweep(c, *files, out);
  if (command == "oracle") return do_oracle(c, *files, out);
  if (command == "audit") return do_audit(c, *files, out);
  if (command == "coupled") return do_coupled(c, *files, out);
  throw InvalidParameter("unknown command '" + command + "'");
}

int run_recorded(const std::string& command, const RunConfig& c, const json& options, const fs::path& dir,
                 std::ostream& out) {
  OutputSet files(dir, command, c);
  int status = kExitOk;
  try {
    status = execute(command, c, options, &files, out);
  } catch (const ConsistencyError&) {
    files.finish(kExitAudit, {{"options", options}});
    throw;
  }
  files.finish(status, {{"options", options}});
  return status;
}

// ---------------------------------------------------------------- replay

int do_replay(const std::string& manifest_path, const std::string& out_flag, std::ostream& out) {
  std::ifstream in(manifest_path);
  if (!in) throw InvalidParameter("cannot open manifest '" + manifest_path + "'");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("manifest: ") + e.what());
  }
  const std::string command = manifest.value("command", "");
  const RunConfig c = config_from_json(manifest.at("config"));
  const json options = manifest.value("options", json::object());
  const fs::path dir = out_flag.empty() ? fs::path(manifest_path).parent_path() / "replay" : fs::path(out_flag);
  std::ostream sink(nullptr);
  const int status = run_recorded(command, c, options, dir, sink);

  bool match = status == manifest.value("status", 0);
  json files = json::array();
  for (const json& f : manifest.at("outputs")) {
    const std::string name = f.at("file").get<std::string>();
    const std::string expected = f.at("sha256").get<std::string>();
    const std::string actual = fs::exists(dir / name) ? sha256_file(dir / name) : "";
    files.push_back({{"file", name}, {"expected", expected}, {"actual", actual}, {"match", expected == actual}});
    match = match && expected == actual;
  }
  const json report = {{"command", command}, {"replay_dir", dir.string()}, {"files", files}, {"match", match}};
  out << report.dump(2) << '\n';
  return match ? kExitOk : kExitAudit;
}

// ---------------------------------------------------------------- formula

struct FormulaInputs {
  double a = NAN, b = NAN, n = NAN, lambda = NAN, alpha = NAN, x = NAN, t = NAN, tol = 1e-12;
  std::string variant = "x";
};

std::uint64_t as_count(double v, const char* name) {
  if (!(v >= 0.0) || v != std::floor(v)) throw InvalidParameter(std::string("--") + name + " must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

int do_formula(const std::string& op, const FormulaInputs& in, const std::map<std::string, bool>& given,
               std::ostream& out) {
  auto need = [&](std::initializer_list<const char*> names) {
    for (const char* name : names) {
      if (!given.at(name)) throw InvalidParameter("formula " + op + " needs --" + name);
    }
  };
  json inputs;
  json output;
  if (op == "immunity-pmf") {
    need({"a", "alpha"});
    inputs = {{"a", as_count(in.a, "a")}, {"alpha", in.alpha}};
    output = analytics::immunity_survival_pmf(as_count(in.a, "a"), in.alpha).p;
  } else if (op == "round-failure") {
    need({"a", "lambda", "alpha"});
    inputs = {{"a", as_count(in.a, "a")}, {"lambda", in.lambda}, {"alpha", in.alpha}};
    output = analytics::round_failure_prob(as_count(in.a, "a"), in.lambda, in.alpha);
  } else if (op == "gautschi") {
    need({"alpha", "x"});
    inputs = {{"alpha", in.alpha}, {"x", in.x}, {"tol", in.tol}};
    output = analytics::gautschi_series(in.alpha, in.x, in.tol).value;
  } else if (op == "gamma-tail") {
    need({"n", "alpha", "t"});
    inputs = {{"n", as_count(in.n, "n")}, {"alpha", in.alpha}, {"t", in.t}};
    output = analytics::gamma_tail_bound(as_count(in.n, "n"), in.alpha, in.t);
  } else if (op == "max-exponentials") {
    need({"n", "lambda"});
    inputs = {{"n", as_count(in.n, "n")}, {"lambda", in.lambda}};
    const analytics::MaxExponentials m = analytics::expected_max_exponentials(as_count(in.n, "n"), in.lambda);
    output = {{"mean", m.mean}, {"bound", m.bound}};
  } else if (op == "leaf-matrix") {
    need({"x", "lambda", "alpha"});
    inputs = {{"x", in.x}, {"lambda", in.lambda}, {"alpha", in.alpha}};
    output = analytics::leaf_transition_matrix(in.x, in.lambda, in.alpha);
  } else if (op == "path-immune") {
    need({"x", "lambda", "alpha"});
    inputs = {{"x", in.x}, {"lambda", in.lambda}, {"alpha", in.alpha}};
    output = analytics::immune_to_infected_path(in.x, in.lambda, in.alpha);
  } else if (op == "path-susceptible") {
    need({"x", "lambda"});
    inputs = {{"x", in.x}, {"lambda", in.lambda}};
    output = analytics::susceptible_to_infected_path(in.x, in.lambda);
  } else if (op == "prop-s-b") {
    need({"alpha"});
    inputs = {{"alpha", in.alpha}};
    output = analytics::prop_s_constant(in.alpha);
  } else if (op == "conditioned-rate") {
    need({"a", "b"});
    inputs = {{"a", in.a}, {"b", in.b}};
    output = analytics::conditioned_exponential_rate(in.a, in.b);
  } else if (op == "exact-mean" || op == "lumped-states") {
    const auto v = parse_variant(in.variant);
    if (!v) throw InvalidParameter("unknown variant '" + in.variant + "'");
    if (op == "lumped-states") {
      need({"n"});
      inputs = {{"n", as_count(in.n, "n")}, {"variant", std::string(to_string(*v))}};
      output = analytics::lumped_state_count({as_count(in.n, "n"), 1.0, 1.0, *v});
    } else {
      need({"n", "lambda", "alpha"});
      const ProcessParams p{as_count(in.n, "n"), in.lambda, in.alpha, *v};
      inputs = to_json(p);
      const analytics::OracleSolution s = analytics::exact_mean_survival(p);
      output = {{"mean_tau", s.mean_tau}, {"mean_psi", s.mean_psi}, {"states", s.states.size()}};
    }
  } else {
    throw InvalidParameter("unknown formula op '" + op + "'");
  }
  out << json{{"operation", op}, {"inputs", inputs}, {"output", output}}.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact simulation and analytics for SIRS-type processes on star graphs", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  // simulate
  RunConfig sim;
  std::uint64_t sim_n = 0;
  double sim_lambda = 1.0, sim_alpha = 1.0;
  std::string sim_variant = "x", sim_engine = "lumped", sim_out;
  bool sim_rounds = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Run replicas at one parameter point and print a JSON summary");
  simulate->add_option("--n", sim_n, "Leaves")->required();
  simulate->add_option("--lambda", sim_lambda, "Infection rate")->required();
  simulate->add_option("--alpha", sim_alpha, "Deimmunization rate");
  simulate->add_option("--variant", sim_variant, "x, y or sis");
  simulate->add_option("--replicas", sim.replicas, "Replicas");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--engine", sim_engine, "lumped or general");
  simulate->add_option("--horizon", sim.horizon, "Censoring horizon");
  simulate->add_option("--workers", sim.workers, "Worker threads (0: all cores)");
  simulate->add_option("--out", sim_out, "Also write summary.json and a manifest here");
  simulate->add_flag("--rounds", sim_rounds, "Write rounds.csv for replica 0 (implies an output directory)");

  // formula
  FormulaInputs fin;
  std::string op;
  CLI::App* formula = app.add_subcommand("formula", "Evaluate a closed-form quantity");
  formula->add_option("--op", op, "immunity-pmf, round-failure, gautschi, gamma-tail, max-exponentials, "
                                  "leaf-matrix, path-immune, path-susceptible, prop-s-b, conditioned-rate, "
                                  "exact-mean, lumped-states")
      ->required();
  std::map<std::string, CLI::Option*> fopts;
  fopts["a"] = formula->add_option("--a", fin.a);
  fopts["b"] = formula->add_option("--b", fin.b);
  fopts["n"] = formula->add_option("--n", fin.n);
  fopts["lambda"] = formula->add_option("--lambda", fin.lambda);
  fopts["alpha"] = formula->add_option("--alpha", fin.alpha);
  fopts["x"] = formula->add_option("--x", fin.x);
  fopts["t"] = formula->add_option("--t", fin.t);
  fopts["tol"] = formula->add_option("--tol", fin.tol);
  formula->add_option("--variant", fin.variant);

  // config-driven commands
  struct ConfigCommand {
    CLI::App* app;
    std::string config;
    std::string out;
    std::optional<unsigned> workers;
  };
  std::map<std::string, ConfigCommand> config_cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"sweep", "Run a parameter grid; write points.csv, result.json and a manifest"},
           {"oracle", "Solve the lumped chain exactly for each grid point"},
           {"audit", "Run the audits toggled in the config"},
           {"coupled", "Run the X/Y coupling over the grid and write one JSON line per run"}}) {
    ConfigCommand& cc = config_cmds[name];
    cc.app = app.add_subcommand(name, help);
    cc.app->add_option("--config", cc.config, "INI configuration file")->required();
    cc.app->add_option("--out", cc.out, "Output directory (default: config, then $SIRS_STAR_OUT)");
    cc.app->add_option("--workers", cc.workers, "Worker threads; results do not depend on it");
  }

  std::string manifest_path, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a command from its manifest and compare output digests");
  replay->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
  replay->add_option("--out", replay_out, "Replay directory (default: <manifest dir>/replay)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      const auto v = parse_variant(sim_variant);
      const auto e = parse_engine(sim_engine);
      if (!v) throw InvalidParameter("unknown variant '" + sim_variant + "'");
      if (!e) throw InvalidParameter("unknown engine '" + sim_engine + "'");
      sim.engine = *e;
      sim.grid.variants = {*v};
      sim.grid.n = {sim_n};
      sim.grid.lambda = {sim_lambda};
      sim.grid.alpha = {sim_alpha};
      const json options = {{"rounds", sim_rounds}};
      if (sim_out.empty() && !sim_rounds) return do_simulate(sim, options, nullptr, out);
      return run_recorded("simulate", sim, options, resolve_out(sim_out, sim), out);
    }
    if (formula->parsed()) {
      std::map<std::string, bool> given;
      for (const auto& [k, o] : fopts) given[k] = o->count() > 0;
      return do_formula(op, fin, given, out);
    }
    if (replay->parsed()) return do_replay(manifest_path, replay_out, out);
    for (auto& [name, cc] : config_cmds) {
      if (!cc.app->parsed()) continue;
      RunConfig c = load_config(cc.config);
      if (cc.workers) c.workers = *cc.workers;
      return run_recorded(name, c, json::object(), resolve_out(cc.out, c), out);
    }
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ConsistencyError& e) {
    err << "audit failure: " << e.what() << '\n';
    return kExitAudit;
  } catch (const InsufficientRange& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace sirs
