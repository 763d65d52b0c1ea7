#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scpm {

// Runs fn(i) for i in [0, task_count) on up to thread_count workers.
// Tasks are claimed through a shared counter; the first exception is
// rethrown on the calling thread after all workers join.
template <typename Fn>
void parallel_for_index(std::size_t task_count, unsigned thread_count, Fn&& fn) {
  if (task_count == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count == 0 ? 1 : thread_count,
                                                  task_count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < task_count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= task_count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace scpm
