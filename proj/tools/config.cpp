// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <iterator>
#include <sstream>
#include <cmath>
#include <fstream>
#include <string_view>

#include "sirs/errors.hpp"

namespace sirs {

namespace pt = boost::property_tree;
using nlohmann::json;

std::vector<ProcessParams> GridConfig::expand() const {
  if (variants.empty() || n.empty() || alpha.empty() || (lambda.empty() && !lambda_exponent)) {
    throw InvalidParameter("grid needs at least one variant, n, lambda (or lambda_exponent) and alpha");
  }
  std::vector<ProcessParams> out;
  for (Variant v : variants) {
    for (std::uint64_t leaves : n) {
      std::vector<double> lambdas = lambda;
      if (lambda_exponent) lambdas = {std::pow(static_cast<double>(leaves), *lambda_exponent)};
      for (double l : lambdas) {
        for (double a : alpha) {
          ProcessParams p{leaves, l, a, v};
          p.validate();
          out.push_back(p);
        }
      }
    }
  }
  return out;
}

ExperimentSpec RunConfig::experiment() const {
  ExperimentSpec spec;
  spec.grid = grid.expand();
  spec.replicas = replicas;
  spec.master_seed = seed;
  spec.engine = engine;
  spec.horizon = horizon;
  spec.workers = workers;
  spec.audits = audit.toggles;
  spec.validate();
  return spec;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw InvalidParameter("config key '" + key + "': " + why);
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t comma = text.find(',');
    out.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) bad(key, "not a number: '" + std::string(s) + "'");
  return v;
}

// Accepts 1000 as well as 1e3.
std::uint64_t to_count(std::string_view s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  const double d = to_double(s, key);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) bad(key, "not a non-negative integer: '" + std::string(s) + "'");
  return static_cast<std::uint64_t>(d);
}

bool to_bool(std::string_view s, const std::string& key) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  bad(key, "expected true or false");
}

template <class T, class F>
std::vector<T> list_of(std::string_view s, const std::string& key, F convert) {
  std::vector<T> out;
  for (std::string_view item : split(s)) out.push_back(convert(item, key));
  if (out.empty()) bad(key, "empty list");
  return out;
}

Variant to_variant(std::string_view s, const std::string& key) {
  const auto v = parse_variant(s);
  if (!v) bad(key, "unknown variant '" + std::string(s) + "'");
  return *v;
}

FitMode to_mode(std::string_view s, const std::string& key) {
  if (s == "vary_lambda_fixed_n") return FitMode::vary_lambda_fixed_n;
  if (s == "vary_n_fixed_lambda") return FitMode::vary_n_fixed_lambda;
  bad(key, "expected vary_lambda_fixed_n or vary_n_fixed_lambda");
}

BandProfile to_profile(std::string_view s, const std::string& key) {
  if (s == "scaling") return BandProfile::scaling;
  if (s == "log_n") return BandProfile::log_n;
  bad(key, "expected scaling or log_n");
}

const char* mode_name(FitMode m) { return m == FitMode::vary_lambda_fixed_n ? "vary_lambda_fixed_n" : "vary_n_fixed_lambda"; }
const char* profile_name(BandProfile p) { return p == BandProfile::scaling ? "scaling" : "log_n"; }

void apply(RunConfig& c, const std::string& section, const std::string& name, std::string_view v) {
  const std::string key = section + "." + name;
  auto is = [&](const char* k) { return name == k; };
  if (section == "experiment") {
    if (is("seed")) c.seed = to_count(v, key);
    else if (is("replicas")) c.replicas = to_count(v, key);
    else if (is("engine")) {
      const auto e = parse_engine(v);
      if (!e) bad(key, "expected lumped or general");
      c.engine = *e;
    } else if (is("horizon")) c.horizon = to_double(v, key);
    else if (is("workers")) c.workers = static_cast<unsigned>(to_count(v, key));
    else if (is("output")) c.output = std::string(v);
    else bad(key, "unknown key");
  } else if (section == "grid") {
    if (is("variant")) c.grid.variants = list_of<Variant>(v, key, to_variant);
    else if (is("n")) c.grid.n = list_of<std::uint64_t>(v, key, to_count);
    else if (is("lambda")) c.grid.lambda = list_of<double>(v, key, to_double);
    else if (is("lambda_exponent")) c.grid.lambda_exponent = to_double(v, key);
    else if (is("alpha")) c.grid.alpha = list_of<double>(v, key, to_double);
    else bad(key, "unknown key");
  } else if (section == "fit") {
    c.fit.enabled = true;
    if (is("exponent")) c.fit.exponent = to_bool(v, key);
    else if (is("mode")) c.fit.mode = to_mode(v, key);
    else if (is("dominance_factor")) c.fit.dominance_factor = to_double(v, key);
    else if (is("slope_min")) c.fit.slope_min = to_double(v, key);
    else if (is("slope_max")) c.fit.slope_max = to_double(v, key);
    else if (is("profile")) c.fit.profile = to_profile(v, key);
    else if (is("band_max")) c.fit.band_max = to_double(v, key);
    else bad(key, "unknown key");
  } else if (section == "audit") {
    AuditConfig& a = c.audit;
    if (is("coupling")) a.toggles.coupling = to_bool(v, key);
    else if (is("floor")) a.toggles.floor = to_bool(v, key);
    else if (is("residual")) a.toggles.residual = to_bool(v, key);
    else if (is("reinfection_gap")) a.toggles.reinfection_gap = to_bool(v, key);
    else if (is("engines")) a.engines = to_bool(v, key);
    else if (is("round_failure")) a.round_failure = to_bool(v, key);
    else if (is("gap_b")) a.gap_b = list_of<std::uint64_t>(v, key, to_count);
    else if (is("gap_samples")) a.gap_samples = to_count(v, key);
    else if (is("floor_min")) a.floor_min = to_double(v, key);
    else if (is("rf_a")) a.round_failure_grid.a = list_of<std::uint64_t>(v, key, to_count);
    else if (is("rf_lambda")) a.round_failure_grid.lambda = list_of<double>(v, key, to_double);
    else if (is("rf_alpha")) a.round_failure_grid.alpha = list_of<double>(v, key, to_double);
    else if (is("rf_trials")) a.round_failure_grid.trials = to_count(v, key);
    else bad(key, "unknown key");
  } else if (section == "oracle") {
    if (is("states")) c.oracle.states = to_bool(v, key);
    else bad(key, "unknown key");
  } else if (section == "coupled") {
    if (is("round_cap")) c.coupled.round_cap = to_count(v, key);
    else if (is("interior_samples")) c.coupled.interior_samples = to_count(v, key);
    else bad(key, "unknown key");
  } else {
    throw InvalidParameter("unknown config section [" + section + "]");
  }
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  pt::ptree tree;
  try {
    std::istringstream copy(text);
    pt::read_ini(copy, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }
  RunConfig c;
  // read_ini drops sections without keys, but a bare [fit] still turns the fit on.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const std::string_view t = trim(line);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
    const std::string section(trim(t.substr(1, t.size() - 2)));
    static constexpr std::string_view kSections[] = {"experiment", "grid", "fit", "audit", "oracle", "coupled"};
    if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
      throw InvalidParameter("unknown config section [" + section + "]");
    }
    if (section == "fit") c.fit.enabled = true;
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw InvalidParameter("config: key '" + section + "' outside any section");
    }
    for (const auto& [name, value] : body) apply(c, section, name, trim(value.data()));
  }
  if (c.replicas == 0) throw InvalidParameter("config key 'experiment.replicas': must be at least 1");
  if (c.workers > 1024) throw InvalidParameter("config key 'experiment.workers': at most 1024");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  return parse_config(in);
}

json config_to_json(const RunConfig& c) {
  json variants = json::array();
  for (Variant v : c.grid.variants) variants.push_back(std::string(to_string(v)));
  json grid = {{"variant", variants}, {"n", c.grid.n}, {"lambda", c.grid.lambda}, {"alpha", c.grid.alpha}};
  if (c.grid.lambda_exponent) grid["lambda_exponent"] = *c.grid.lambda_exponent;
  json fit = {{"enabled", c.fit.enabled},
              {"exponent", c.fit.exponent},
              {"mode", mode_name(c.fit.mode)},
              {"dominance_factor", c.fit.dominance_factor},
              {"profile", profile_name(c.fit.profile)}};
  if (c.fit.slope_min) fit["slope_min"] = *c.fit.slope_min;
  if (c.fit.slope_max) fit["slope_max"] = *c.fit.slope_max;
  if (c.fit.band_max) fit["band_max"] = *c.fit.band_max;
  const AuditConfig& a = c.audit;
  json audit = {{"coupling", a.toggles.coupling},
                {"floor", a.toggles.floor},
                {"residual", a.toggles.residual},
                {"reinfection_gap", a.toggles.reinfection_gap},
                {"engines", a.engines},
                {"round_failure", a.round_failure},
                {"gap_b", a.gap_b},
                {"gap_samples", a.gap_samples},
                {"rf_a", a.round_failure_grid.a},
                {"rf_lambda", a.round_failure_grid.lambda},
                {"rf_alpha", a.round_failure_grid.alpha},
                {"rf_trials", a.round_failure_grid.trials}};
  if (a.floor_min) audit["floor_min"] = *a.floor_min;
  return {{"experiment",
           {{"seed", c.seed},
            {"replicas", c.replicas},
            {"engine", std::string(to_string(c.engine))},
            {"horizon", c.horizon},
            {"workers", c.workers}}},
          {"grid", grid},
          {"fit", fit},
          {"audit", audit},
          {"oracle", {{"states", c.oracle.states}}},
          {"coupled", {{"round_cap", c.coupled.round_cap}, {"interior_samples", c.coupled.interior_samples}}}};
}

RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    const json& e = j.at("experiment");
    c.seed = e.at("seed").get<std::uint64_t>();
    c.replicas = e.at("replicas").get<std::uint64_t>();
    c.engine = parse_engine(e.at("engine").get<std::string>()).value();
    c.horizon = e.at("horizon").get<double>();
    c.workers = e.at("workers").get<unsigned>();

    const json& g = j.at("grid");
    c.grid.variants.clear();
    for (const json& v : g.at("variant")) c.grid.variants.push_back(parse_variant(v.get<std::string>()).value());
    c.grid.n = g.at("n").get<std::vector<std::uint64_t>>();
    c.grid.lambda = g.at("lambda").get<std::vector<double>>();
    c.grid.alpha = g.at("alpha").get<std::vector<double>>();
    if (g.contains("lambda_exponent")) c.grid.lambda_exponent = g["lambda_exponent"].get<double>();

    const json& f = j.at("fit");
    c.fit.enabled = f.at("enabled").get<bool>();
    c.fit.exponent = f.at("exponent").get<bool>();
    c.fit.mode = to_mode(f.at("mode").get<std::string>(), "fit.mode");
    c.fit.dominance_factor = f.at("dominance_factor").get<double>();
    c.fit.profile = to_profile(f.at("profile").get<std::string>(), "fit.profile");
    if (f.contains("slope_min")) c.fit.slope_min = f["slope_min"].get<double>();
    if (f.contains("slope_max")) c.fit.slope_max = f["slope_max"].get<double>();
    if (f.contains("band_max")) c.fit.band_max = f["band_max"].get<double>();

    const json& a = j.at("audit");
    c.audit.toggles.coupling = a.at("coupling").get<bool>();
    c.audit.toggles.floor = a.at("floor").get<bool>();
    c.audit.toggles.residual = a.at("residual").get<bool>();
    c.audit.toggles.reinfection_gap = a.at("reinfection_gap").get<bool>();
    c.audit.engines = a.at("engines").get<bool>();
    c.audit.round_failure = a.at("round_failure").get<bool>();
    c.audit.gap_b = a.at("gap_b").get<std::vector<std::uint64_t>>();
    c.audit.gap_samples = a.at("gap_samples").get<std::uint64_t>();
    c.audit.round_failure_grid.a = a.at("rf_a").get<std::vector<std::uint64_t>>();
    c.audit.round_failure_grid.lambda = a.at("rf_lambda").get<std::vector<double>>();
    c.audit.round_failure_grid.alpha = a.at("rf_alpha").get<std::vector<double>>();
    c.audit.round_failure_grid.trials = a.at("rf_trials").get<std::uint64_t>();
    if (a.contains("floor_min")) c.audit.floor_min = a["floor_min"].get<double>();

    c.oracle.states = j.at("oracle").at("states").get<bool>();
    c.coupled.round_cap = j.at("coupled").at("round_cap").get<std::uint64_t>();
    c.coupled.interior_samples = j.at("coupled").at("interior_samples").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("manifest config: ") + e.what());
  } catch (const std::bad_optional_access&) {
    throw InvalidParameter("manifest config: unknown engine or variant name");
  }
}

}  // namespace sirs
