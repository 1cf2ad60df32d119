#pragma once

#include <cstddef>
#include <functional>

namespace kqse {

// Number of workers to use when the caller asks for 0 ("all cores").
unsigned resolve_workers(unsigned requested);

// Calls body(i) for i in [0, count) on up to `workers` threads. Indices are
// handed out dynamically; callers store results by index so the outcome does
// not depend on scheduling. The first exception thrown by any body is
// rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace kqse
