#pragma once

#include <cstddef>
#include <functional>

namespace covertlab {

/// Runs fn(0) ... fn(count-1) across `jobs` worker threads (jobs == 0 means
/// hardware concurrency). Work items must be independent; results must be
/// written to per-index slots so the outcome cannot depend on scheduling.
/// jobs == 1 runs inline. The first exception thrown by a work item is
/// rethrown on the calling thread after all workers join.
void parallel_for(std::size_t jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn);

}  // namespace covertlab
