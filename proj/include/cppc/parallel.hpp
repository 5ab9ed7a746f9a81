#pragma once

#include <cstddef>
#include <functional>

namespace cppc {

/// Worker cap: CPPC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_cap();

/// Runs fn(0..n-1). Each index is handled by exactly one worker, so results
/// written to per-index slots are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cppc
