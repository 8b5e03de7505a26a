#pragma once

#include <cstddef>
#include <functional>

namespace landau {

/// Number of worker threads used by the particle kernels. Defaults to the
/// LANDAU_NUM_THREADS environment variable, else 1.
int num_threads();
void set_num_threads(int n);

/// Calls body(begin, end) on contiguous chunks of [0, count). Every index is
/// handled by exactly one call, so per-index results do not depend on the
/// thread count.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace landau
