#pragma once

#include <cstddef>
#include <functional>

namespace topotwpa {

/// Worker count from TOPOTWPA_WORKERS, else the number of hardware threads.
unsigned default_workers();

/// Calls body(i) for i in [0, n) on up to `workers` threads (0 = default).
/// Work items are claimed dynamically; callers write into pre-assigned
/// slots. The first exception thrown by any item is rethrown after all
/// threads have joined.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace topotwpa
