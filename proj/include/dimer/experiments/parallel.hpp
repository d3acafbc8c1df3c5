// parallel.hpp: a deterministic parallel loop over independent tasks.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dimer::experiments {

/// requested > 0 wins; otherwise DIMERSIM_THREADS, otherwise the hardware
/// concurrency. Always >= 1.
int thread_count(int requested = 0);

/// Runs body(i) for i in [0, n). Each task writes only to its own slot, so the
/// result does not depend on scheduling. The exception of the lowest failing
/// index is rethrown after all workers have finished.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count(threads)));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dimer::experiments
