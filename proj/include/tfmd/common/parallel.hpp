#pragma once

#include <cstddef>
#include <functional>

namespace tfmd {

// Worker count: TFMD_THREADS if set and positive, otherwise the hardware
// concurrency (at least 1).
std::size_t thread_budget();

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// visited exactly once; callers write results into per-index slots so the
// outcome never depends on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace tfmd
