#pragma once

#include <functional>

namespace asp {

// Worker cap: hardware concurrency, reduced by the ASP_SNN_THREADS
// environment variable if set.
int worker_count();

// Runs fn over [0, n) in contiguous chunks on up to worker_count() threads.
// Work must be index-addressed so results are identical for any thread
// count. The first exception thrown by any chunk is rethrown.
void parallel_for(int n, int grain, const std::function<void(int, int)>& fn);

}  // namespace asp
