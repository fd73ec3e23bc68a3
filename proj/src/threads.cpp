#include "logsp/threads.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace logsp {

namespace {
std::atomic<int> g_thread_cap{1};
}

void set_thread_cap(int n) { g_thread_cap.store(std::max(1, n)); }
int thread_cap() { return g_thread_cap.load(); }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const int cap = thread_cap();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>({static_cast<std::size_t>(cap), hw, count});
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace logsp
