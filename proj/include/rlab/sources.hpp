#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rlab/core_math.hpp"

namespace rlab {

/// Flat weighted point set: coords holds size()*dim() values, point-major.
/// Every source measure reduces to one of these for kernel evaluation.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }
  void push_back(const double* x, double w);
};

struct Atom {
  double weight;
  Vec location;
};

/// Finite nonnegative combination of point masses sum_j A_j delta_{a_j}.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(std::vector<Atom> atoms);

  std::size_t dim() const { return points_.dim; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const PointSet& points() const { return points_; }
  double total_mass() const;

  /// Largest pairwise distance between atoms (0 for a single atom).
  double diameter() const;
  Vec centroid() const;

 private:
  std::vector<Atom> atoms_;
  PointSet points_;
};

/// Cell-centered regular grid: cell (i_0..i_{n-1}) has center origin + (i + 1/2) h.
struct GridSpec {
  Vec origin;
  double h = 0.0;
  std::vector<std::size_t> shape;

  std::size_t dim() const { return origin.size(); }
  std::size_t cell_count() const;
  Vec cell_center(std::size_t linear) const;
  Vec upper_corner() const;
  /// Linear index of the cell containing x, if x lies in the grid box.
  std::optional<std::size_t> locate(const Vec& x) const;
  bool contains(const Vec& x) const;

  /// Grid centered on the atoms' bounding box with `pad` extra length per side.
  static GridSpec covering(const AtomicMeasure& measure, double h, double pad);
};

/// Nonnegative density sampled at cell centers; integrals use the midpoint rule.
class GriddedDensity {
 public:
  GriddedDensity(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t dim() const { return grid_.dim(); }
  double h() const { return grid_.h; }
  const std::vector<double>& values() const { return values_; }
  double total_mass() const { return total_mass_; }

  /// Nonzero cells as point masses h^n * value at the cell centers.
  const PointSet& points() const { return points_; }
  /// Position in points() of a grid cell, or -1 for a zero cell.
  std::int64_t slot_of_cell(std::size_t linear) const { return slot_[linear]; }

  double value_at_cell(std::size_t linear) const { return values_[linear]; }
  AtomicMeasure as_atoms() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double total_mass_;
  PointSet points_;
  std::vector<std::int64_t> slot_;
};

using SourceMeasure = std::variant<AtomicMeasure, GriddedDensity>;

double total_mass(const SourceMeasure& source);
std::size_t source_dim(const SourceMeasure& source);
const PointSet& source_points(const SourceMeasure& source);

/// Heat-kernel smoothing (4 pi t)^{-n/2} int exp(-|y-xi|^2/4t) dmu(xi) sampled
/// on `grid`. Throws ConfigError if the grid box misses more than 1e-6 of the
/// mass or the spacing cannot resolve the Gaussian to that accuracy.
GriddedDensity mollify(const AtomicMeasure& measure, double t, const GridSpec& grid);

/// Grid for mollify at time t: spacing sqrt(t)/cells_per_sqrt_t, box padded by
/// pad_sqrt_t * sqrt(t) around the atoms.
GridSpec mollifier_grid(const AtomicMeasure& measure, double t, double cells_per_sqrt_t = 2.0,
                        double pad_sqrt_t = 8.0);

/// Fraction of the mass of `measure` that a heat kernel at time t keeps inside
/// the grid box.
double captured_heat_mass_fraction(const AtomicMeasure& measure, double t, const GridSpec& grid);

/// Uniform density `level` on the ball |y - center| <= radius. Boundary cells
/// carry their covered volume fraction: closed form over the last two axes,
/// Gauss-Legendre over any others.
GriddedDensity uniform_ball_density(std::size_t n, double radius, double h, double level = 1.0,
                                    std::optional<Vec> center = std::nullopt);

}  // namespace rlab
