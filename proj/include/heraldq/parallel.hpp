#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace heraldq {

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled exactly once, so writes into per-index slots give results that do
/// not depend on the pool size. The first exception thrown is rethrown.
template <typename Body>
void parallel_for(int n, Body&& body, unsigned workers = std::thread::hardware_concurrency()) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(n, 1))));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      (void)t;
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace heraldq
