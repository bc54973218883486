// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace sirs {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite
// values. Locale independent, so data files are byte-stable.
std::string format_double(double value);

}  // namespace sirs
