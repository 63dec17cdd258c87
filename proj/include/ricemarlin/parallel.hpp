#pragma once

#include <cstddef>
#include <functional>

namespace ricemarlin {

/// Runs fn(i) for i in [0, count) on up to `threads` threads (0 = hardware
/// concurrency). The first exception thrown is rethrown after all workers end.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace ricemarlin
