#pragma once

#include <cstdint>
#include <functional>

namespace mlsde {

// Runs body(i) for every i in [0, count). With workers > 1 the iterations are
// distributed over a temporary thread pool; the body must only write to
// per-index slots. Results must not depend on the worker count, so callers
// store per-index outputs and reduce them in index order afterwards.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& body);

}  // namespace mlsde
