#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace karcher::harness {

/// Worker cap: KARCHER_THREADS if set, else the hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("KARCHER_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, n) across up to `threads` workers. Each index
/// owns its slot of any result vector, so bodies stay lock-free; the first
/// exception is rethrown after all workers join.
inline void parallel_for(long n, int threads,
                         const std::function<void(long)>& body) {
  if (threads <= 0) threads = default_thread_count();
  if (threads == 1 || n <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next(0);
  std::exception_ptr error;
  std::atomic<bool> failed(false);
  auto worker = [&]() {
    while (true) {
      const long i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace karcher::harness
