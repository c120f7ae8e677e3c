#include "reilly/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace reilly {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int threads) { g_default_threads = threads; }
int default_threads() { return g_default_threads; }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (g_default_threads > 0) return g_default_threads;
  if (const char* env = std::getenv("REILLY_LAB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace reilly
