#pragma once

// Deterministic sampling: a Halton sequence with a seeded Cranley-Patterson
// rotation, plus a small portable RNG wrapper.  std::*_distribution is avoided
// because its output differs between standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "reilly/geometry.hpp"

namespace reilly {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double radical_inverse(std::uint64_t index, int base);

/// `count` points in [0,1)^dim.
std::vector<std::vector<double>> halton_points(int dim, int count, std::uint64_t seed);

/// Interior sample points of the primary chart, keeping `margin` (fraction of the
/// interval width) away from non-periodic edges.
std::vector<ChartPoint> sample_chart_points(const ChartManifold& m, int count, std::uint64_t seed,
                                            double margin = 0.05);

/// Vector with independent standard normal frame components, mapped to chart components.
Vec random_tangent(const LocalGeometry& geo, SeededRng& rng);
Vec random_unit_tangent(const LocalGeometry& geo, SeededRng& rng);

}  // namespace reilly
