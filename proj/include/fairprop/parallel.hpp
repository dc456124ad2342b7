// Minimal deterministic work-sharing: split an index range across threads
// in contiguous blocks. Results must be written by index into preallocated
// storage, so the assembled output never depends on scheduling order.
#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fairprop {

// Number of workers to use when the caller does not say: the hardware
// concurrency, at least 1.
inline int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Invokes fn(i) for every i in [0, count) using at most jobs threads.
// Exceptions from workers are rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::int64_t count, int jobs, Fn&& fn) {
  if (count <= 0) return;
  jobs = std::max(1, jobs);
  jobs = static_cast<int>(std::min<std::int64_t>(jobs, count));
  if (jobs == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  const std::int64_t block = (count + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    const std::int64_t lo = w * block;
    const std::int64_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    workers.emplace_back([&, w, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace fairprop
