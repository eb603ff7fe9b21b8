// parallel.hpp — minimal fork-join helper.  FRACCAL_THREADS caps the worker
// count (default: hardware concurrency).  Results must be written to
// per-index slots so the output is identical for any thread count.

#pragma once

#include <functional>

namespace fraccal {

int thread_cap();

// Runs fn(0..n-1); indices are partitioned over at most thread_cap()
// workers.  Exceptions from workers are rethrown on the calling thread.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace fraccal
