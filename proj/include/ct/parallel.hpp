#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ct {

// Worker budget: COEFF_TRANSFER_THREADS when set (clamped to [1, 256]),
// otherwise the hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("COEFF_TRANSFER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Run f(0), ..., f(count-1) across the worker budget.  Tasks must be
// independent; the first exception wins and is rethrown after all workers
// stop.  Callers that need ordered output index into preallocated slots.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  const std::size_t budget = std::min<std::size_t>(thread_budget(), count);
  if (budget <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto run = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(budget);
  for (std::size_t t = 0; t < budget; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ct
