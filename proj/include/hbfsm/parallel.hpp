#pragma once

#include <thread>
#include <vector>

namespace hbfsm {

// Static range split over `workers` threads. Deterministic results require
// that iterations be independent and written to disjoint slots (or reduced
// with order-insensitive integer sums) — every call site here does that.
template <class Fn>
void parallel_for(long n, int workers, Fn&& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  const int t = int(std::min<long>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    const long lo = n * w / t;
    const long hi = n * (w + 1) / t;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hbfsm
