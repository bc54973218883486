// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sirs/analytics.hpp"
#include "sirs/config.hpp"
#include "sirs/experiments.hpp"

namespace sirs {

inline constexpr const char* kToolName = "sirs-star";
std::string tool_version();

// Lowercase hex SHA-256 of a file's bytes. Throws std::runtime_error if the
// file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

nlohmann::json to_json(const ProcessParams& p);
nlohmann::json to_json(const stats::Summary& s);
nlohmann::json to_json(const stats::Proportion& p);
nlohmann::json to_json(const PointResult& p);

// One row per grid point. Columns (frozen): variant,n,lambda,alpha,replicas,
// censored,unreliable,tau_mean,tau_variance,tau_se,tau_ci_low,tau_ci_high,
// psi_mean,psi_se,floor_passes,mean_events.
void write_points_csv(std::ostream& out, const ExperimentResult& result);

// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(const std::string& text);

// Collects the data files of one command, then writes manifest.json with
// their digests. Data files never hold timestamps; the manifest does.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command, RunConfig config);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  // Opens dir/name for writing (truncating) and records it for the manifest.
  std::ofstream open(const std::string& name);
  void write_json(const std::string& name, const nlohmann::json& value);
  // Writes manifest.json; `status` is the exit code the command reports.
  void finish(int status, const nlohmann::json& extra = nlohmann::json::object());

 private:
  std::filesystem::path dir_;
  std::string command_;
  RunConfig config_;
  std::string started_;
  std::vector<std::string> files_;
};

std::string utc_timestamp();

}  // namespace sirs
