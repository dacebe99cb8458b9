#pragma once

#include <cstddef>
#include <functional>

namespace rigged {

/// Worker count: RIGGED_THREADS if set and positive, otherwise the hardware
/// concurrency. Never less than 1.
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous blocks. Each index is handled
/// by exactly one call, so results written by index are independent of the
/// thread count. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rigged
