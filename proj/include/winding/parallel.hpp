#pragma once

#include <cstddef>
#include <functional>

namespace winding {

/// Worker count: hardware concurrency, capped by the WINDING_THREADS
/// environment variable when it is set to a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads, handing
/// out small chunks of indices. body must only write to slot i of its
/// outputs. Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace winding
