#pragma once

#include <cstddef>
#include <functional>

namespace scars {

/// Worker count used by parallel_for. Defaults to the hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n). Iterations must be independent; results
/// written to per-index slots are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace scars
