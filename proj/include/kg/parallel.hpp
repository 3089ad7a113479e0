#pragma once

#include <cstdint>
#include <functional>

namespace kg {

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Each index is processed exactly once; callers own
/// determinism by writing to per-index slots, so the result does not
/// depend on scheduling.
void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace kg
