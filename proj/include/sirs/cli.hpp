// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace sirs {

// Stable exit-code contract of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,     // I/O or other unexpected failure
  kExitUsage = 2,     // bad flags, config or parameters
  kExitCapacity = 3,  // size limit of an engine or the oracle exceeded
  kExitAudit = 4,     // a hard audit or configured check failed
};

// Entry point behind the sirs-star binary; the streams stand in for stdout
// and stderr so tests can drive it in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sirs
