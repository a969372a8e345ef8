#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyplab {

/// Knobs shared by the range-based operations.
struct ComputeOptions {
  std::size_t segment_cap = std::size_t{1} << 24;  // max entries per table
  unsigned threads = 1;
  std::uint64_t work_cap = 10'000'000;  // max tuples examined by one delta_r call
};

/// Runs task(i) for i in [0, count) on up to `threads` workers. Tasks must
/// write to disjoint locations; results therefore do not depend on the
/// thread count. The first exception thrown by any task is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hyplab
