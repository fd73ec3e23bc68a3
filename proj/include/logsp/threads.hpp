#pragma once

#include <cstddef>
#include <functional>

namespace logsp {

/// Global cap on internal parallelism (kernel build, probe batches).
/// Default 1; the CLI sets it from --threads or LOGSP_THREADS.
void set_thread_cap(int n);
int thread_cap();

/// Runs fn(begin,end) over disjoint chunks of [0,count).  Results written by
/// index stay deterministic regardless of the number of worker threads.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace logsp
