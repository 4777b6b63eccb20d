// betaflow: deterministic path-parallel execution.
#pragma once

#include <cstddef>
#include <functional>

namespace betaflow {

// 0 or negative requests one worker per hardware thread.
int resolve_thread_count(int requested);

// Runs fn(i) for every i in [0, count). Work is handed out by an atomic
// counter, so the assignment of paths to threads varies, but each path's seed
// and result slot depend only on its index; any reduction done afterwards in
// index order is independent of the thread count. threads <= 1 runs inline.
// The first exception thrown by any fn is rethrown after all workers join.
void parallel_for_paths(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace betaflow
