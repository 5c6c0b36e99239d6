#pragma once

#include <cstddef>
#include <functional>

namespace tracelab {

/// Worker count: hardware concurrency, capped by TRACE_LAB_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.  Each
/// index writes only its own output slot, so results do not depend on the
/// thread count.  The first exception thrown is rethrown after joining.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tracelab
