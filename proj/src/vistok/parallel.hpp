// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <functional>

namespace vistok {

/// Worker count for internal parallel loops: MMTF_THREADS when set to a
/// positive integer, otherwise the hardware concurrency.
unsigned max_threads();

/// Runs body(begin, end) over disjoint chunks of [0, n). Results must not
/// depend on the chunking.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace vistok
