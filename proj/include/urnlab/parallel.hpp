#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace urnlab {

/// Worker threads to use: URNLAB_THREADS if set, else the hardware count.
unsigned worker_count();

/// Runs f(i) for i in [0, count) over contiguous chunks, one per worker.
/// The first exception thrown by any worker is rethrown on the caller.
template <typename F>
void parallel_for(std::size_t count, F&& f) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(count, (w + 1) * chunk);
          for (std::size_t i = w * chunk; i < end; ++i) f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace urnlab
