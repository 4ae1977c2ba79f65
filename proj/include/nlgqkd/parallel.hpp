#ifndef NLGQKD_PARALLEL_HPP
#define NLGQKD_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nlgqkd::parallel {

// Worker count: hardware concurrency capped by NLGQKD_THREADS (>=1).
inline int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("NLGQKD_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

// Runs fn(i) for i in [0, count). Work is split into fixed contiguous chunks
// so results derived from per-index seeds are independent of thread count.
inline void parallel_for(int64_t count, const std::function<void(int64_t)>& fn) {
  const int nt = std::min<int64_t>(max_threads(), std::max<int64_t>(count, 1));
  if (nt <= 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int64_t chunk = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const int64_t lo = t * chunk, hi = std::min<int64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace nlgqkd::parallel

#endif
