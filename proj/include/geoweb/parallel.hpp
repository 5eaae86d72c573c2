#pragma once

#include <cstddef>
#include <functional>

namespace geoweb {

/// Worker count from GEOWEB_THREADS (0 or unset = hardware concurrency).
int thread_count();

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int threads = thread_count());

} // namespace geoweb
