#pragma once

#include <cstddef>
#include <functional>

namespace neurowf {

/// Number of worker threads to use. Reads NEUROWF_THREADS if set (values < 1
/// are treated as 1), otherwise the hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Iterations must
/// be independent; results written to distinct slots are race-free. The first
/// exception thrown by any iteration is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace neurowf
