#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace expts {

// 0 means "one worker per hardware thread".
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(i) for every i in [0, count) on up to `workers` threads. Work is
// handed out by index, so fn must write its result to slot i; the caller
// reduces in index order. The first exception thrown by fn is rethrown here.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(resolve_workers(workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(count);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace expts
