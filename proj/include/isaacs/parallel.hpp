#pragma once

#include <cstddef>
#include <functional>

namespace isaacs {

/// Worker count: the explicit override if set, else ISAACS_LAB_THREADS, else
/// hardware concurrency.
std::size_t thread_count();

/// Overrides the worker count for this process; 0 restores the default.
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) over contiguous chunks. Callers must write
/// results to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace isaacs
