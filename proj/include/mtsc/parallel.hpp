#pragma once

#include <cstddef>
#include <functional>

namespace mtsc {

/// Worker thread count: hardware concurrency, capped by the MTSC_THREADS
/// environment variable when it holds a positive integer.
std::size_t worker_threads();

/// Runs task(i) for i in [0, count) on up to worker_threads() threads. Tasks
/// must write to disjoint outputs. The first exception thrown is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace mtsc
