#pragma once

// Ordered parallel map.  Work items are split into contiguous blocks, results are
// written by index, so the output (and any reduction done afterwards in index
// order) does not depend on the thread count.

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace reilly {

/// Thread count: explicit value if > 0, else REILLY_LAB_THREADS, else hardware concurrency.
int resolve_threads(int requested = 0);
void set_default_threads(int threads);
int default_threads();

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, int threads = 0) {
  std::vector<T> out(n);
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), std::max<std::size_t>(n, 1));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / t, hi = n * (w + 1) / t;
      try {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

/// Pairwise (cascade) summation in index order.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v, 0, v.size()); }

}  // namespace reilly
