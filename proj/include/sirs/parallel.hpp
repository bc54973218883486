// Copyright 2026 The sirs-star Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace sirs {

// Calls body(k) for every k in [0, count) on up to `workers` threads (0 means
// hardware concurrency). Bodies must write only to index-owned slots. If any
// body throws, the exception of the lowest failing index is rethrown after all
// threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned requested) noexcept;

}  // namespace sirs
