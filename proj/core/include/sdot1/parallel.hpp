#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace sdot1 {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(begin, end) over disjoint chunks of [0, count). The work split
/// depends on the thread count but callers are expected to combine results
/// in a fixed order (e.g. per row) so output stays thread-count independent.
inline void parallel_chunks(int count, int threads,
                            const std::function<void(int, int)>& fn) {
  threads = std::min(resolve_threads(threads), std::max(count, 1));
  if (threads <= 1 || count <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace sdot1
