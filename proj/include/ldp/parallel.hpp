#pragma once

#include <cstddef>
#include <functional>

namespace ldp {

/// Worker count: LDP_WORKERS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(worker, begin, end) on contiguous chunks covering [0, count).
/// The first exception thrown by any worker is rethrown after all join.
void parallel_chunks(std::size_t count,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& body,
                     unsigned workers = worker_count());

}  // namespace ldp
