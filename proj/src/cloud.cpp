#include "rlab/cloud.hpp"

#include <array>
#include <cmath>
#include <random>

#include "rlab/errors.hpp"

namespace rlab {

double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

constexpr std::array<std::uint32_t, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                   23, 29, 31, 37, 41, 43, 47, 53};

struct Box {
  Vec lo;
  Vec hi;
};

Box default_box(const SourceMeasure& source) {
  const std::size_t n = source_dim(source);
  const PointSet& pts = source_points(source);
  Vec lo(n, std::numeric_limits<double>::infinity());
  Vec hi(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], pts.point(i)[k]);
      hi[k] = std::max(hi[k], pts.point(i)[k]);
    }
  }
  if (pts.size() == 0) {
    lo = Vec(n, -1.0);
    hi = Vec(n, 1.0);
  }
  double half_extent = 0.0;
  for (std::size_t k = 0; k < n; ++k) half_extent = std::max(half_extent, 0.5 * (hi[k] - lo[k]));
  const double half = 2.0 + half_extent;
  Box b{Vec(n), Vec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double mid = 0.5 * (lo[k] + hi[k]);
    b.lo[k] = mid - half;
    b.hi[k] = mid + half;
  }
  return b;
}

double distance_to_atoms(const Vec& x, const AtomicMeasure* atoms) {
  if (atoms == nullptr) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms->atoms()) best = std::min(best, norm(x - a.location));
  return best;
}

Vec random_direction(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  Vec d(n);
  double len = 0.0;
  while (len < 1e-12) {
    for (std::size_t k = 0; k < n; ++k) d[k] = gauss(rng);
    len = norm(d);
  }
  return (1.0 / len) * d;
}

}  // namespace

std::vector<Vec> make_cloud(const SourceMeasure& source, const SampleSpec& spec) {
  const std::size_t n = source_dim(source);
  if (n > kPrimes.size()) throw UsageError("make_cloud: dimension too large for Halton bases");
  Box box = default_box(source);
  if (spec.box_lo) box.lo = *spec.box_lo;
  if (spec.box_hi) box.hi = *spec.box_hi;
  if (box.lo.size() != n || box.hi.size() != n) throw UsageError("make_cloud: box dimension");

  const AtomicMeasure* atoms = std::get_if<AtomicMeasure>(&source);
  std::mt19937_64 rng(spec.seed);
  Vec shift(n);
  for (std::size_t k = 0; k < n; ++k) shift[k] = unit_interval(rng());

  std::vector<Vec> cloud;
  cloud.reserve(spec.count + 64);
  std::uint64_t index = 1;
  const std::uint64_t max_index = 1000 * (spec.count + 10);
  while (cloud.size() < spec.count) {
    if (index > max_index) throw ConfigError("make_cloud: box is covered by atom exclusion zones");
    Vec x(n);
    for (std::size_t k = 0; k < n; ++k) {
      double u = halton(index, kPrimes[k]) + shift[k];
      u -= std::floor(u);
      x[k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
    }
    ++index;
    if (distance_to_atoms(x, atoms) < spec.min_atom_distance) continue;
    cloud.push_back(std::move(x));
  }

  if (atoms != nullptr && spec.stress_points && atoms->size() <= 64) {
    for (const auto& a : atoms->atoms()) {
      std::vector<Vec> dirs;
      for (std::size_t k = 0; k < n; ++k) {
        dirs.push_back(Vec::unit(n, k));
        dirs.push_back(Vec::unit(n, k, -1.0));
      }
      dirs.push_back(random_direction(rng, n));
      dirs.push_back(random_direction(rng, n));
      for (const auto& d : dirs) {
        Vec x = a.location + spec.near_atom_distance * d;
        if (distance_to_atoms(x, atoms) >= spec.min_atom_distance) cloud.push_back(std::move(x));
      }
    }
  }

  if (spec.far_field) {
    Vec center(n);
    double diameter = 1.0;
    if (atoms != nullptr) {
      center = atoms->centroid();
      diameter = std::max(1.0, atoms->diameter());
    } else {
      const auto& g = std::get<GriddedDensity>(source).grid();
      center = 0.5 * (g.origin + g.upper_corner());
      diameter = std::max(1.0, norm(g.upper_corner() - g.origin));
    }
    for (int i = 0; i < 4; ++i) cloud.push_back(center + (10.0 * diameter) * random_direction(rng, n));
  }
  return cloud;
}

}  // namespace rlab
