#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cclique {

// Runs fn(0), ..., fn(njobs-1) on up to `workers` threads. fn must handle
// its own errors; job order is unspecified, so callers write into
// preallocated per-index slots.
inline void parallel_for(int njobs, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, njobs));
  if (workers == 1) {
    for (int i = 0; i < njobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= njobs) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// Worker count from CCLIQUE_THREADS, else the hardware concurrency.
inline int env_worker_count() {
  if (const char* env = std::getenv("CCLIQUE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace cclique
