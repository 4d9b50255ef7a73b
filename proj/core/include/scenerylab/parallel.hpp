#pragma once

#include <cstddef>
#include <functional>

namespace scenerylab {

// Worker count: SCENERYLAB_THREADS when set and positive, otherwise the
// hardware concurrency.
int threadCount();

// Runs body(i) for i in [0, n). Results must be written to per-index slots;
// callers reduce them sequentially afterwards so the outcome does not depend
// on scheduling. The exception thrown for the smallest index is rethrown.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace scenerylab
