// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Drives the CLI on the shipped configs, re-checks every
// number it relies on from the written files, and prints one PASS/FAIL line
// per criterion. Usage: acceptance <configs dir> <scratch dir>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sirs/analytics.hpp"
#include "sirs/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sirs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path configs;
  fs::path scratch;
  std::vector<fs::path> manifests;  // every recorded run, replayed by criterion 12
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Runs one CLI command into scratch/<name>; returns its exit code and wall time.
struct CliRun {
  int code = -1;
  double seconds = 0.0;
  fs::path dir;
};

CliRun cli(Context& ctx, const std::string& command, const std::string& config, const std::string& name) {
  CliRun r;
  r.dir = ctx.scratch / name;
  fs::remove_all(r.dir);
  const std::string cfg = (ctx.configs / (config + ".ini")).string();
  const std::string out = r.dir.string();
  const char* argv[] = {"sirs-star", command.c_str(), "--config", cfg.c_str(), "--out", out.c_str()};
  std::ostringstream sink_out, sink_err;
  const auto t0 = std::chrono::steady_clock::now();
  r.code = run_cli(6, argv, sink_out, sink_err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (fs::exists(r.dir / "manifest.json")) ctx.manifests.push_back(r.dir / "manifest.json");
  if (r.code != kExitOk && r.code != kExitAudit) {
    throw std::runtime_error(command + " " + config + " exited " + std::to_string(r.code) + ": " + sink_err.str());
  }
  return r;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("missing " + p.string());
  return json::parse(in);
}

std::string timing(double seconds, double limit) {
  return fmt(std::round(seconds * 10.0) / 10.0) + " s (limit " + fmt(limit) + " s)";
}

// ------------------------------------------------------------------------

Outcome oracle_equivalence(Context& ctx) {
  const CliRun run = cli(ctx, "sweep", "oracle_equivalence", "c01_oracle_equivalence");
  const json r = read_json(run.dir / "result.json");
  std::size_t cells = 0, within = 0;
  double worst = 0.0;
  for (const json& p : r.at("points")) {
    const ProcessParams params{p["params"]["n"].get<std::uint64_t>(), p["params"]["lambda"].get<double>(),
                               p["params"]["alpha"].get<double>(),
                               parse_variant(p["params"]["variant"].get<std::string>()).value()};
    const double exact = analytics::exact_mean_survival(params).mean_tau;
    const double z = std::abs(p["tau"]["mean"].get<double>() - exact) / p["tau"]["se"].get<double>();
    worst = std::max(worst, z);
    ++cells;
    if (z <= 4.0 && p["replicas"].get<std::uint64_t>() == 100'000 && p["censored"].get<std::uint64_t>() == 0) ++within;
  }
  // The whole grid finishing inside one cell's budget bounds every cell.
  const bool fast = run.seconds < 60.0;
  return {cells == 54 && within == cells && fast,
          std::to_string(within) + "/" + std::to_string(cells) + " cells within 4 SE (max |z| " +
              fmt(std::round(worst * 100) / 100) + "), grid " + timing(run.seconds, 60)};
}

double pmf_by_quadrature(int a, int b, double alpha) {
  const double log_choose = std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  auto f = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return alpha * std::exp(log_choose + (alpha + b - 1.0) * std::log(u) + (a - b) * std::log1p(-u));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, 1.0);
}

Outcome closed_forms(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  double pmf_err = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int a = 0; a <= 50; ++a) {
      const auto t = analytics::immunity_survival_pmf(static_cast<std::uint64_t>(a), alpha);
      for (int b = 0; b <= a; ++b) {
        const double q = a == 0 ? 1.0 : pmf_by_quadrature(a, b, alpha);
        pmf_err = std::max(pmf_err, std::abs(t.p[b] - q));
      }
    }
  }
  const CliRun run = cli(ctx, "audit", "round_failure", "c02_round_failure");
  const json r = read_json(run.dir / "audit.json");
  std::size_t cells = 0, covered = 0;
  for (const json& c : r.at("round_failure")) {
    const double exact =
        analytics::round_failure_prob(c["a"].get<std::uint64_t>(), c["lambda"].get<double>(), c["alpha"].get<double>());
    const json& f = c.at("frequency");
    ++cells;
    if (f["trials"].get<std::uint64_t>() == 100'000 && f["low"].get<double>() <= exact &&
        exact <= f["high"].get<double>()) {
      ++covered;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = pmf_err < 1e-8 && cells == 24 && covered == cells && seconds < 600.0;
  return {ok, "pmf vs quadrature max error " + fmt(pmf_err) + "; " + std::to_string(covered) + "/" +
                  std::to_string(cells) + " Wilson 99% intervals cover the closed form; " + timing(seconds, 600)};
}

Outcome scaling(Context& ctx, const std::string& config, const std::string& name) {
  const CliRun run = cli(ctx, "sweep", config, name);
  const json r = read_json(run.dir / "result.json");
  const double slope = r.at("fit").at("slope").get<double>();
  const double ratio = r.at("band").at("ratio").get<double>();
  bool sizes = r.at("points").size() == 3;
  for (const json& p : r.at("points")) {
    sizes = sizes && p["replicas"].get<std::uint64_t>() >= 500 && !p["unreliable"].get<bool>();
  }
  const bool ok = sizes && slope >= 0.75 && slope <= 1.25 && ratio <= 5.0 && run.seconds <= 1800.0;
  return {ok, "slope " + fmt(slope) + " in [0.75, 1.25], band ratio " + fmt(ratio) + " <= 5, " +
                  timing(run.seconds, 1800)};
}

Outcome large_lambda(Context& ctx) {
  const CliRun run = cli(ctx, "sweep", "large_lambda", "c05_large_lambda");
  const json r = read_json(run.dir / "result.json");
  const double slope = r.at("fit").at("slope").get<double>();
  const bool ok = r.at("fit").at("used").size() == 3 && slope >= 0.75 && slope <= 1.25 && run.seconds <= 600.0;
  return {ok, "slope of log mean tau vs log n " + fmt(slope) + " in [0.75, 1.25], " + timing(run.seconds, 600)};
}

Outcome small_lambda(Context& ctx) {
  const CliRun run = cli(ctx, "sweep", "small_lambda", "c06_small_lambda");
  const json r = read_json(run.dir / "result.json");
  double lo = INFINITY, hi = 0.0;
  for (const json& p : r.at("points")) {
    const double v = p["tau"]["mean"].get<double>() / std::log(p["params"]["n"].get<double>());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double ratio = hi / lo;
  const bool ok = r.at("points").size() == 3 && ratio <= 4.0 && run.seconds <= 600.0;
  return {ok, "mean tau / log n in [" + fmt(lo) + ", " + fmt(hi) + "], ratio " + fmt(ratio) + " <= 4, " +
                  timing(run.seconds, 600)};
}

Outcome coupling(Context& ctx) {
  const CliRun run = cli(ctx, "coupled", "coupling", "c07_coupling");
  std::ifstream lines(run.dir / "coupled.jsonl");
  std::size_t runs = 0, good = 0;
  std::uint64_t rounds = 0;
  for (std::string line; std::getline(lines, line);) {
    const json j = json::parse(line);
    ++runs;
    rounds += j["rounds"].get<std::uint64_t>();
    if (j["psi_x"].get<std::uint64_t>() <= j["psi_y"].get<std::uint64_t>() && j["ir_ok"].get<bool>() &&
        j["passed"].get<bool>()) {
      ++good;
    }
  }
  const bool ok = runs == 10'000 && good == runs && run.code == kExitOk && run.seconds <= 900.0;
  return {ok, std::to_string(good) + "/" + std::to_string(runs) + " runs with Psi_X <= Psi_Y and immune-leaf " +
                  "dominance over " + std::to_string(rounds) + " X rounds, " + timing(run.seconds, 900)};
}

Outcome floor_audit(Context& ctx) {
  const CliRun run = cli(ctx, "audit", "floor", "c08_floor");
  const json f = read_json(run.dir / "audit.json").at("floor").at(0);
  const double rate = f["pass_rate"]["estimate"].get<double>();
  const std::uint64_t trials = f["pass_rate"]["trials"].get<std::uint64_t>();
  const bool ok = trials == 1000 && std::abs(f["threshold"].get<double>() - 1.0 / 64.0) < 1e-15 && rate >= 0.999 &&
                  run.seconds <= 600.0;
  return {ok, "floor 1/64 held in " + fmt(rate) + " of " + std::to_string(trials) + " runs (need 0.999), " +
                  timing(run.seconds, 600)};
}

Outcome residual(Context& ctx) {
  const CliRun run = cli(ctx, "audit", "residual", "c09_residual");
  const json list = read_json(run.dir / "audit.json").at("residual");
  bool ok = list.size() == 2 && run.seconds <= 600.0;
  std::string detail;
  for (const json& e : list) {
    const double n = e["params"]["n"].get<double>();
    const double mean = e["residual"]["mean"].get<double>();
    const std::uint64_t count = e["residual"]["count"].get<std::uint64_t>();
    ok = ok && count >= 10'000 && mean <= 2.0 * std::log(n);
    detail += "n=" + fmt(n) + ": mean " + fmt(mean) + " <= " + fmt(2.0 * std::log(n)) + " over " +
              std::to_string(count) + "; ";
  }
  return {ok, detail + timing(run.seconds, 600)};
}

Outcome engines(Context& ctx) {
  double seconds = 0.0;
  bool ok = true;
  std::string detail;
  for (const char* config : {"engines_x", "engines_y"}) {
    const CliRun run = cli(ctx, "audit", config, std::string("c10_") + config);
    seconds += run.seconds;
    const json e = read_json(run.dir / "audit.json").at("engines").at(0);
    const double z = e["z"].get<double>(), ks = e["ks"].get<double>(), crit = e["ks_critical"].get<double>();
    ok = ok && e["lumped"]["count"].get<std::uint64_t>() == 20'000 &&
         e["general"]["count"].get<std::uint64_t>() == 20'000 && z <= 4.0 && ks < crit;
    detail += std::string(config) + ": z " + fmt(z) + ", KS " + fmt(ks) + " < " + fmt(crit) + "; ";
  }
  return {ok && seconds <= 300.0, detail + timing(seconds, 300)};
}

Outcome gautschi(Context&) {
  double worst = 0.0;
  for (double alpha : {1.5, 2.0, 3.7}) {
    for (double x : {0.7, 0.9}) {
      const double lhs = (1.0 - x) * analytics::gautschi_series(alpha, x, 1e-13).value;
      const double rhs = (alpha - 1.0) * analytics::gautschi_series(alpha - 1.0, x, 1e-13).value;
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
  }
  const double s1 = analytics::gautschi_series(1.0, 2.0 / 3.0, 1e-13).value;
  const bool ok = worst < 1e-8 && std::abs(s1 - 3.0) < 1e-10;
  return {ok, "recurrence max relative error " + fmt(worst) + ", |S_1(2/3) - 3| = " + fmt(std::abs(s1 - 3.0))};
}

Outcome determinism(Context& ctx) {
  std::size_t files = 0, matched = 0, runs = 0, clean = 0;
  for (const fs::path& manifest : ctx.manifests) {
    const fs::path dir = manifest.parent_path().string() + "_replay";
    fs::remove_all(dir);
    const std::string m = manifest.string(), d = dir.string();
    const char* argv[] = {"sirs-star", "replay", "--manifest", m.c_str(), "--out", d.c_str()};
    std::ostringstream out, err;
    const int code = run_cli(6, argv, out, err);
    const json report = json::parse(out.str());
    ++runs;
    if (code == kExitOk && report.at("match").get<bool>()) ++clean;
    for (const json& f : report.at("files")) {
      ++files;
      if (f["match"].get<bool>()) ++matched;
    }
  }
  return {runs > 0 && clean == runs && matched == files,
          std::to_string(matched) + "/" + std::to_string(files) + " data files byte-identical across " +
              std::to_string(runs) + " replayed manifests"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <configs dir> <scratch dir>\n";
    return 2;
  }
  Context ctx{argv[1], argv[2], {}};
  fs::create_directories(ctx.scratch);

  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"immunity pmf and round failure", closed_forms},
      {"scaling in lambda^2 n, variant X", [](Context& c) { return scaling(c, "scaling_x", "c03_scaling_x"); }},
      {"scaling in lambda^2 n, variant Y", [](Context& c) { return scaling(c, "scaling_y", "c04_scaling_y"); }},
      {"large-lambda growth in n", large_lambda},
      {"small-lambda log n band", small_lambda},
      {"X/Y coupling", coupling},
      {"non-immune floor", floor_audit},
      {"post-immunity residual", residual},
      {"engine equivalence", engines},
      {"Gautschi series", gautschi},
      {"determinism from manifests", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (k + 1) << ' ' << criteria[k].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
