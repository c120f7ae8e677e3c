#include "reilly/sampling.hpp"

#include <cmath>
#include <numbers>

#include "reilly/errors.hpp"

namespace reilly {

double SeededRng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

std::vector<std::vector<double>> halton_points(int dim, int count, std::uint64_t seed) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13};
  if (dim < 1 || dim > 6) throw ContractViolation("halton_points supports dims 1..6");
  if (count < 0) throw ContractViolation("negative sample count");
  SeededRng rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (auto& s : shift) s = rng.uniform();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(dim)));
  for (int i = 0; i < count; ++i)
    for (int d = 0; d < dim; ++d) {
      const double v = radical_inverse(static_cast<std::uint64_t>(i) + 1, primes[d]) + shift[static_cast<std::size_t>(d)];
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = v - std::floor(v);
    }
  return out;
}

std::vector<ChartPoint> sample_chart_points(const ChartManifold& m, int count, std::uint64_t seed, double margin) {
  if (count < 1) throw ContractViolation("at least one sample point is required");
  const Chart& c = m.primary();
  const auto unit = halton_points(c.dim(), count, seed);
  std::vector<ChartPoint> out;
  out.reserve(unit.size());
  for (const auto& u : unit) {
    ChartPoint p{0, Vec(c.dim())};
    for (int d = 0; d < c.dim(); ++d) {
      const Interval iv = c.box[static_cast<std::size_t>(d)];
      const double m0 = c.periodic[static_cast<std::size_t>(d)] ? 0.0 : margin;
      p.coords(d) = iv.lo + iv.width() * (m0 + (1.0 - 2.0 * m0) * u[static_cast<std::size_t>(d)]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

Vec random_tangent(const LocalGeometry& geo, SeededRng& rng) {
  Vec w(geo.dim());
  for (int i = 0; i < geo.dim(); ++i) w(i) = rng.normal();
  return geo.frame() * w;
}

Vec random_unit_tangent(const LocalGeometry& geo, SeededRng& rng) {
  Vec v = random_tangent(geo, rng);
  while (geo.norm(v) < 1e-6) v = random_tangent(geo, rng);
  return v / geo.norm(v);
}

}  // namespace reilly
