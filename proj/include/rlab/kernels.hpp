#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rlab/sources.hpp"

namespace rlab::kernels {

enum class Kernel {
  Power,  // |x-y|^{-alpha}
  Log,    // log|x-y|, with alpha treated as 0 in the derivative moments
};

inline constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

/// Raw weighted sums over a point set, with d = x - y and r = |d|:
///   s0 = sum w k(r)            (k = r^{-alpha} or log r)
///   s1 = sum w r^{-(alpha+1)}
///   s2 = sum w r^{-(alpha+2)}
///   v  = sum w d r^{-(alpha+2)}
///   m  = sum w d d^T r^{-(alpha+4)}   (packed upper triangle)
struct MomentSums {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  std::vector<double> v;
  std::vector<double> m;
  /// Some point coincided with x (r == 0).
  bool hit_singularity = false;

  explicit MomentSums(std::size_t dim = 0) : v(dim, 0.0), m(dim * (dim + 1) / 2, 0.0) {}
  MomentSums& operator+=(const MomentSums& o);
};

/// Single-threaded reference: one sequential pass in point order. Point
/// `skip` (if any) is excluded.
MomentSums accumulate_moments_serial(const PointSet& pts, std::span<const double> x, double alpha,
                                     Kernel kernel, std::size_t skip = kNoSkip);

/// OpenMP version. Points are split into fixed chunks of `chunk` points and
/// the chunk partials are combined by a pairwise tree in chunk order, so the
/// result is bitwise identical for any thread count.
MomentSums accumulate_moments_parallel(const PointSet& pts, std::span<const double> x,
                                       double alpha, Kernel kernel, std::size_t skip = kNoSkip,
                                       std::size_t chunk = 2048);

/// The three quadruple sums of the I-expansion without their coefficients:
///   q1 = sum w_y w_z w_v w_w <x-z,x-v> / (r_y^a r_z^{a+2} r_v^{a+2} r_w^{a+2})
///   q2 = sum ... <x-z,x-w><x-v,x-w> / (r_y^a r_z^{a+2} r_v^{a+2} r_w^{a+4})
///   q3 = sum ... <x-y,x-w><x-z,x-v> / (r_y^{a+2} r_z^{a+2} r_v^{a+2} r_w^{a+2})
struct QuadSums {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

QuadSums quadruple_sums_serial(const PointSet& pts, std::span<const double> x, double alpha);
/// Parallel over the outermost index; per-index partials reduced pairwise in
/// index order (bitwise reproducible).
QuadSums quadruple_sums_parallel(const PointSet& pts, std::span<const double> x, double alpha);

/// Pairwise (tree) sum of values in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace rlab::kernels
