// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#include "sirs/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "sirs/format.hpp"
#include "sirs/simd/dispatch.hpp"

#ifndef SIRS_VERSION
#define SIRS_VERSION "0.0.0"
#endif

namespace sirs {

using nlohmann::json;

std::string tool_version() { return SIRS_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned k = 0; k < len; ++k) {
    hex.push_back(kHex[md[k] >> 4]);
    hex.push_back(kHex[md[k] & 15]);
  }
  return hex;
}

json to_json(const ProcessParams& p) {
  return {{"variant", std::string(to_string(p.variant))}, {"n", p.n}, {"lambda", p.lambda}, {"alpha", p.alpha}};
}

json to_json(const stats::Summary& s) {
  return {{"count", s.count}, {"mean", s.mean},      {"variance", s.variance},
          {"se", s.se},       {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
}

json to_json(const stats::Proportion& p) {
  return {{"successes", p.successes}, {"trials", p.trials}, {"estimate", p.estimate}, {"low", p.low}, {"high", p.high}};
}

json to_json(const PointResult& p) {
  return {{"params", to_json(p.params)},   {"replicas", p.replicas},     {"censored", p.censored},
          {"unreliable", p.unreliable},    {"tau", to_json(p.tau)},      {"psi", to_json(p.psi)},
          {"floor_passes", p.floor_passes}, {"mean_events", p.mean_events}};
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_points_csv(std::ostream& out, const ExperimentResult& result) {
  out << "variant,n,lambda,alpha,replicas,censored,unreliable,tau_mean,tau_variance,tau_se,tau_ci_low,tau_ci_high,"
         "psi_mean,psi_se,floor_passes,mean_events\n";
  for (const PointResult& p : result.points) {
    out << csv_field(std::string(to_string(p.params.variant))) << ',' << p.params.n << ','
        << format_double(p.params.lambda) << ',' << format_double(p.params.alpha) << ',' << p.replicas << ','
        << p.censored << ',' << (p.unreliable ? "true" : "false") << ',' << format_double(p.tau.mean) << ','
        << format_double(p.tau.variance) << ',' << format_double(p.tau.se) << ',' << format_double(p.tau.ci_low)
        << ',' << format_double(p.tau.ci_high) << ',' << format_double(p.psi.mean) << ',' << format_double(p.psi.se)
        << ',' << p.floor_passes << ',' << format_double(p.mean_events) << '\n';
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OutputSet::OutputSet(std::filesystem::path dir, std::string command, RunConfig config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)), started_(utc_timestamp()) {
  std::filesystem::create_directories(dir_);
}

std::ofstream OutputSet::open(const std::string& name) {
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  files_.push_back(name);
  return out;
}

void OutputSet::write_json(const std::string& name, const json& value) {
  std::ofstream out = open(name);
  out << value.dump(2) << '\n';
}

void OutputSet::finish(int status, const json& extra) {
  json outputs = json::array();
  for (const std::string& f : files_) outputs.push_back({{"file", f}, {"sha256", sha256_file(dir_ / f)}});
  const ExperimentSpec spec_probe = [&] {
    try {
      return config_.experiment();
    } catch (...) {
      return ExperimentSpec{};
    }
  }();
  json replicas = json::array();
  for (const ProcessParams& p : spec_probe.grid) replicas.push_back({{"params", to_json(p)}, {"replicas", config_.replicas}});
  json manifest = {{"tool", kToolName},
                   {"version", tool_version()},
                   {"command", command_},
                   {"master_seed", config_.seed},
                   {"config", config_to_json(config_)},
                   {"replicas", replicas},
                   {"simd_level", std::string(simd::level_name(simd::active_level()))},
                   {"started", started_},
                   {"finished", utc_timestamp()},
                   {"status", status},
                   {"outputs", outputs}};
  for (const auto& [k, v] : extra.items()) manifest[k] = v;
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

}  // namespace sirs
