#pragma once

#include <cstddef>
#include <functional>

namespace spl {

// Worker count: SPL_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Each index runs exactly once; the first
// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace spl
