#pragma once

#include <cstddef>
#include <functional>

namespace pinchloc {

/// Worker count: PINCHLOC_THREADS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

/// Calls body(i) for every i in [0, count). Work is split into contiguous
/// chunks; callers write results into per-index slots so the outcome does not
/// depend on the thread count. The first exception thrown by any body is
/// rethrown after all workers have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pinchloc
