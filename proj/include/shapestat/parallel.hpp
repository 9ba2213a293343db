#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shapestat {

/// Worker count: SHAPESTAT_THREADS caps it, 0 or unset means auto.
inline int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SHAPESTAT_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested > 0) {
      return static_cast<int>(requested);
    }
  }
  return static_cast<int>(hw);
}

/// Runs f(i) for i in [0, n) on up to thread_budget() workers. Results must
/// be written to per-index slots by the caller; the first exception thrown
/// by any task is rethrown after all workers finish.
template <typename F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      f(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace shapestat
