#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace rsid {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Work is split into contiguous index blocks;
// results must be written to per-index slots so the outcome does not depend
// on scheduling. If workers throw, the exception raised at the smallest index
// is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  threads = static_cast<int>(
      std::min<std::size_t>(resolve_thread_count(threads), count == 0 ? 1 : count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads, nullptr);
  std::vector<std::size_t> error_index(threads, std::numeric_limits<std::size_t>::max());
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, t, &fn, &errors, &error_index] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          error_index[t] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  std::exception_ptr first = nullptr;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  for (std::size_t t = 0; t < errors.size(); ++t)
    if (errors[t] && error_index[t] < first_index) {
      first = errors[t];
      first_index = error_index[t];
    }
  if (first) std::rethrow_exception(first);
}

} // namespace rsid
