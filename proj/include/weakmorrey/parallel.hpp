#pragma once

// Index-parallel map over a bounded worker pool. Results land in their own
// slots, so output never depends on the worker count. WEAKMORREY_THREADS
// caps the number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace weakmorrey {

inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WEAKMORREY_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

template <class T, class F>
std::vector<T> parallel_map_on(std::size_t max_workers, std::size_t count, F&& fn) {
  std::vector<T> out(count);
  const std::size_t workers = std::min(std::max<std::size_t>(max_workers, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_index = count;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(m);
        // Report the lowest failing index, as a serial loop would.
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& fn) {
  return parallel_map_on<T>(worker_count(), count, std::forward<F>(fn));
}

}  // namespace weakmorrey
