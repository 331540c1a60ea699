#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ledgernet {

unsigned default_worker_count();

/// Coordinator/worker loop: `workers` threads pull blocks of `grain`
/// consecutive indices from [0, count) and call fn(worker_id, index) for
/// each. The first exception thrown by any worker is rethrown after all
/// workers stop.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn, std::size_t grain = 64) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= grain) {
    for (std::size_t i = 0; i < count; ++i) fn(0u, i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, (count + grain - 1) / grain));
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            std::size_t begin = next.fetch_add(grain, std::memory_order_relaxed);
            if (begin >= count) return;
            std::size_t end = std::min(count, begin + grain);
            for (std::size_t i = begin; i < end; ++i) fn(w, i);
          }
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ledgernet
