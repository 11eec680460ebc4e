// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace pccolor {

/// Worker count used by every parallel pass. Defaults to the PCCOLOR_THREADS
/// environment variable if set, otherwise the hardware concurrency.
std::size_t thread_count();

/// Overrides the worker count for the current process (0 restores the
/// default). Mainly for tests that compare outputs across worker counts.
void set_thread_count(std::size_t n);

/// Calls fn(i) for every i in [0, n). Work is split into contiguous chunks;
/// callers must only write state owned by index i so the result does not
/// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pccolor
