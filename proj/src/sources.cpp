#include "rlab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "quadrature.hpp"
#include "rlab/errors.hpp"

namespace rlab {

void PointSet::push_back(const double* x, double w) {
  coords.insert(coords.end(), x, x + dim);
  weights.push_back(w);
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw UsageError("AtomicMeasure: at least one atom required");
  const std::size_t n = atoms_.front().location.size();
  if (n == 0) throw UsageError("AtomicMeasure: atom locations must be nonempty vectors");
  points_.dim = n;
  for (const auto& a : atoms_) {
    if (a.location.size() != n) throw UsageError("AtomicMeasure: atoms have mixed dimensions");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw UsageError("AtomicMeasure: weights must be finite and nonnegative");
    }
    if (!a.location.all_finite()) throw UsageError("AtomicMeasure: atom location not finite");
    points_.push_back(a.location.data(), a.weight);
  }
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double AtomicMeasure::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms_.size(); ++j) {
      d = std::max(d, norm(atoms_[i].location - atoms_[j].location));
    }
  }
  return d;
}

Vec AtomicMeasure::centroid() const {
  Vec c(dim());
  for (const auto& a : atoms_) c += a.location;
  return (1.0 / static_cast<double>(atoms_.size())) * c;
}

std::size_t GridSpec::cell_count() const {
  std::size_t c = 1;
  for (auto s : shape) c *= s;
  return c;
}

Vec GridSpec::cell_center(std::size_t linear) const {
  const std::size_t n = dim();
  Vec x(n);
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t i = linear % shape[k];
    linear /= shape[k];
    x[k] = origin[k] + (static_cast<double>(i) + 0.5) * h;
  }
  return x;
}

Vec GridSpec::upper_corner() const {
  Vec u = origin;
  for (std::size_t k = 0; k < dim(); ++k) u[k] += static_cast<double>(shape[k]) * h;
  return u;
}

std::optional<std::size_t> GridSpec::locate(const Vec& x) const {
  if (x.size() != dim()) throw UsageError("GridSpec::locate: dimension mismatch");
  std::size_t linear = 0;
  for (std::size_t k = 0; k < dim(); ++k) {
    const double s = (x[k] - origin[k]) / h;
    if (!(s >= 0.0) || s >= static_cast<double>(shape[k])) return std::nullopt;
    linear = linear * shape[k] + static_cast<std::size_t>(s);
  }
  return linear;
}

bool GridSpec::contains(const Vec& x) const { return locate(x).has_value(); }

GridSpec GridSpec::covering(const AtomicMeasure& measure, double h, double pad) {
  if (!(h > 0.0)) throw ConfigError("GridSpec::covering: spacing must be positive");
  const std::size_t n = measure.dim();
  Vec lo(n, std::numeric_limits<double>::infinity());
  Vec hi(n, -std::numeric_limits<double>::infinity());
  for (const auto& a : measure.atoms()) {
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], a.location[k]);
      hi[k] = std::max(hi[k], a.location[k]);
    }
  }
  GridSpec g;
  g.h = h;
  g.origin = Vec(n);
  g.shape.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mid = 0.5 * (lo[k] + hi[k]);
    const double half = 0.5 * (hi[k] - lo[k]) + pad;
    // odd cell count keeps a cell center on the box midpoint
    const auto cells = 2 * static_cast<std::size_t>(std::ceil(half / h - 0.5)) + 1;
    g.shape[k] = cells;
    g.origin[k] = mid - 0.5 * static_cast<double>(cells) * h;
  }
  return g;
}

GriddedDensity::GriddedDensity(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const std::size_t n = grid_.dim();
  if (n == 0) throw UsageError("GriddedDensity: empty origin");
  if (grid_.shape.size() != n) throw UsageError("GriddedDensity: shape rank differs from origin");
  if (!(grid_.h > 0.0) || !std::isfinite(grid_.h)) {
    throw UsageError("GriddedDensity: spacing must be positive");
  }
  if (values_.size() != grid_.cell_count()) {
    throw UsageError("GriddedDensity: expected " + std::to_string(grid_.cell_count()) +
                     " values, got " + std::to_string(values_.size()));
  }
  const double cell_volume = std::pow(grid_.h, static_cast<double>(n));
  points_.dim = n;
  slot_.assign(values_.size(), -1);
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw UsageError("GriddedDensity: values must be finite and nonnegative");
    }
    sum += v;
    if (v > 0.0) {
      slot_[i] = static_cast<std::int64_t>(points_.size());
      const Vec c = grid_.cell_center(i);
      points_.push_back(c.data(), cell_volume * v);
    }
  }
  total_mass_ = cell_volume * sum;
}

AtomicMeasure GriddedDensity::as_atoms() const {
  std::vector<Atom> atoms;
  atoms.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double* p = points_.point(i);
    atoms.push_back({points_.weights[i], Vec(std::vector<double>(p, p + points_.dim))});
  }
  if (atoms.empty()) throw UsageError("GriddedDensity::as_atoms: density is identically zero");
  return AtomicMeasure(std::move(atoms));
}

double total_mass(const SourceMeasure& source) {
  return std::visit([](const auto& s) { return s.total_mass(); }, source);
}

std::size_t source_dim(const SourceMeasure& source) {
  return std::visit([](const auto& s) { return s.dim(); }, source);
}

const PointSet& source_points(const SourceMeasure& source) {
  return std::visit([](const auto& s) -> const PointSet& { return s.points(); }, source);
}

double captured_heat_mass_fraction(const AtomicMeasure& measure, double t, const GridSpec& grid) {
  const Vec hi = grid.upper_corner();
  const double scale = 1.0 / (2.0 * std::sqrt(t));
  double captured = 0.0;
  for (const auto& a : measure.atoms()) {
    double f = 1.0;
    for (std::size_t k = 0; k < measure.dim(); ++k) {
      f *= 0.5 * (std::erf((hi[k] - a.location[k]) * scale) -
                  std::erf((grid.origin[k] - a.location[k]) * scale));
    }
    captured += a.weight * f;
  }
  const double mass = measure.total_mass();
  return mass > 0.0 ? captured / mass : 1.0;
}

GriddedDensity mollify(const AtomicMeasure& measure, double t, const GridSpec& grid) {
  if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("mollify: t must be positive");
  const std::size_t n = measure.dim();
  if (grid.dim() != n) throw UsageError("mollify: grid dimension differs from the measure");
  if (!(grid.h > 0.0)) throw UsageError("mollify: grid spacing must be positive");

  constexpr double kMassTol = 1e-6;
  const double captured = captured_heat_mass_fraction(measure, t, grid);
  if (captured < 1.0 - kMassTol) {
    // per-axis tail erfc(d / 2 sqrt t) <= tol / n on both sides
    double pad = 0.0;
    while (std::erfc(pad / 2.0) > kMassTol / (2.0 * static_cast<double>(n))) pad += 0.25;
    throw ConfigError("mollify: grid keeps only " + std::to_string(captured) +
                      " of the mass; pad the atoms by at least " + std::to_string(pad) +
                      " * sqrt(t) = " + std::to_string(pad * std::sqrt(t)) + " per side");
  }

  // The Gaussian is separable: per atom, tabulate one factor per axis.
  const double norm_factor = std::pow(4.0 * std::numbers::pi * t, -0.5 * static_cast<double>(n));
  std::vector<double> values(grid.cell_count(), 0.0);
  std::vector<std::vector<double>> axis(n);
  for (const auto& a : measure.atoms()) {
    if (a.weight == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      axis[k].resize(grid.shape[k]);
      for (std::size_t i = 0; i < grid.shape[k]; ++i) {
        const double d = grid.origin[k] + (static_cast<double>(i) + 0.5) * grid.h - a.location[k];
        axis[k][i] = std::exp(-d * d / (4.0 * t));
      }
    }
    const double amp = a.weight * norm_factor;
#pragma omp parallel for schedule(static)
    for (std::int64_t li = 0; li < static_cast<std::int64_t>(values.size()); ++li) {
      std::size_t rest = static_cast<std::size_t>(li);
      double v = amp;
      for (std::size_t k = n; k-- > 0;) {
        v *= axis[k][rest % grid.shape[k]];
        rest /= grid.shape[k];
      }
      values[static_cast<std::size_t>(li)] += v;
    }
  }

  GriddedDensity out(grid, std::move(values));
  const double expected = measure.total_mass();
  if (expected > 0.0 && std::abs(out.total_mass() - expected) > kMassTol * expected) {
    throw ConfigError("mollify: spacing h = " + std::to_string(grid.h) +
                      " does not resolve the heat kernel at t = " + std::to_string(t) +
                      " (mass error " + std::to_string(out.total_mass() / expected - 1.0) +
                      "); use h <= sqrt(t)");
  }
  return out;
}

GridSpec mollifier_grid(const AtomicMeasure& measure, double t, double cells_per_sqrt_t,
                        double pad_sqrt_t) {
  const double s = std::sqrt(t);
  return GridSpec::covering(measure, s / cells_per_sqrt_t, pad_sqrt_t * s);
}

namespace {

// Antiderivative of sqrt(R^2 - y^2) on [-R, R].
double disk_primitive(double y, double radius) {
  const double s = std::sqrt(std::max(0.0, radius * radius - y * y));
  return 0.5 * (y * s + radius * radius * std::asin(std::clamp(y / radius, -1.0, 1.0)));
}

// Exact integral over y in [a, b] of the length of [zlo, zhi] inside
// [-s, s], s = sqrt(R2 - y^2). The length is piecewise linear in s, so each
// piece integrates in closed form.
double clipped_chord_integral(double a, double b, double R2, double zlo, double zhi) {
  if (!(R2 > 0.0)) return 0.0;
  const double R = std::sqrt(R2);
  auto len = [&](double s) { return std::min(s, zhi) - std::max(-s, zlo); };
  std::vector<double> knots{0.0, R};
  for (double c : {std::abs(zlo), std::abs(zhi)}) {
    if (c > 0.0 && c < R) knots.push_back(c);
  }
  std::sort(knots.begin(), knots.end());
  const std::size_t linear_pieces = knots.size() - 1;
  for (std::size_t i = 0; i < linear_pieces; ++i) {
    const double f0 = len(knots[i]);
    const double f1 = len(knots[i + 1]);
    if ((f0 < 0.0) != (f1 < 0.0)) knots.push_back(knots[i] + (knots[i + 1] - knots[i]) * f0 / (f0 - f1));
  }
  std::sort(knots.begin(), knots.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double s0 = knots[i];
    const double s1 = knots[i + 1];
    if (!(s1 > s0)) continue;
    const double f0 = len(s0);
    const double f1 = len(s1);
    if (f0 <= 0.0 && f1 <= 0.0) continue;
    const double slope = (f1 - f0) / (s1 - s0);
    const double offset = f0 - slope * s0;
    const double ylo = std::sqrt(std::max(0.0, R2 - s1 * s1));
    const double yhi = std::sqrt(std::max(0.0, R2 - s0 * s0));
    for (const auto& [lo0, hi0] : {std::pair{ylo, yhi}, std::pair{-yhi, -ylo}}) {
      const double lo = std::max(lo0, a);
      const double hi = std::min(hi0, b);
      if (hi <= lo) continue;
      total += offset * (hi - lo) + slope * (disk_primitive(hi, R) - disk_primitive(lo, R));
    }
  }
  return total;
}

// Covered fraction of a boundary cell. The last two axes are integrated
// exactly; any remaining axes use a tensor Gauss-Legendre rule.
double ball_cell_fraction(const Vec& center, double h, double radius, const detail::Rule& rule) {
  const std::size_t n = center.size();
  const double r2 = radius * radius;
  const double zlo = center[n - 1] - 0.5 * h;
  const double zhi = center[n - 1] + 0.5 * h;
  if (n == 1) return std::max(0.0, std::min(radius, zhi) - std::max(-radius, zlo)) / h;

  const double ylo = center[n - 2] - 0.5 * h;
  const double yhi = center[n - 2] + 0.5 * h;
  const std::size_t outer_dims = n - 2;
  const std::size_t q = rule.nodes.size();
  std::vector<std::size_t> idx(outer_dims, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    double rho2 = 0.0;
    for (std::size_t k = 0; k < outer_dims; ++k) {
      const double y = center[k] + 0.5 * h * rule.nodes[idx[k]];
      rho2 += y * y;
      w *= rule.weights[idx[k]] * 0.5;
    }
    total += w * clipped_chord_integral(ylo, yhi, r2 - rho2, zlo, zhi);
    std::size_t k = 0;
    while (k < outer_dims && ++idx[k] == q) idx[k++] = 0;
    if (k == outer_dims) break;
  }
  return total / (h * h);
}

}  // namespace

GriddedDensity uniform_ball_density(std::size_t n, double radius, double h, double level,
                                    std::optional<Vec> center) {
  if (n < 1) throw UsageError("uniform_ball_density: dimension must be positive");
  if (!(radius > 0.0) || !(h > 0.0)) throw UsageError("uniform_ball_density: radius, h > 0");
  const Vec c = center.value_or(Vec(n));
  if (c.size() != n) throw UsageError("uniform_ball_density: center dimension mismatch");

  const auto half_cells = static_cast<std::size_t>(std::ceil(radius / h));
  GridSpec g;
  g.h = h;
  g.origin = Vec(n);
  g.shape.assign(n, 2 * half_cells);
  for (std::size_t k = 0; k < n; ++k) g.origin[k] = c[k] - static_cast<double>(half_cells) * h;

  static const detail::Rule rule = detail::gauss_legendre<32>();
  std::vector<double> values(g.cell_count(), 0.0);
  const double r2 = radius * radius;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t li = 0; li < static_cast<std::int64_t>(values.size()); ++li) {
    const Vec x = g.cell_center(static_cast<std::size_t>(li)) - c;
    double near2 = 0.0;
    double far2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = std::abs(x[k]) - 0.5 * h;
      const double hi = std::abs(x[k]) + 0.5 * h;
      near2 += lo > 0.0 ? lo * lo : 0.0;
      far2 += hi * hi;
    }
    double frac = 0.0;
    if (far2 <= r2) {
      frac = 1.0;
    } else if (near2 < r2) {
      frac = ball_cell_fraction(x, h, radius, rule);
    }
    values[static_cast<std::size_t>(li)] = level * frac;
  }
  return GriddedDensity(std::move(g), std::move(values));
}

}  // namespace rlab
