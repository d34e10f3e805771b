#include <cmath>
#include <vector>

#include "kernel_point.hpp"
#include "rlab/errors.hpp"
#include "rlab/kernels.hpp"

namespace rlab::kernels {

MomentSums& MomentSums::operator+=(const MomentSums& o) {
  s0 += o.s0;
  s1 += o.s1;
  s2 += o.s2;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  for (std::size_t i = 0; i < m.size(); ++i) m[i] += o.m[i];
  hit_singularity = hit_singularity || o.hit_singularity;
  return *this;
}

MomentSums accumulate_moments_serial(const PointSet& pts, std::span<const double> x, double alpha,
                                     Kernel kernel, std::size_t skip) {
  const std::size_t n = pts.dim;
  if (x.size() != n) throw UsageError("accumulate_moments: dimension mismatch");
  MomentSums acc(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == skip) continue;
    detail::add_point(acc, pts.point(i), pts.weights[i], x.data(), n, alpha, kernel, d.data());
  }
  return acc;
}

QuadSums quadruple_sums_serial(const PointSet& pts, std::span<const double> x, double alpha) {
  if (x.size() != pts.dim) throw UsageError("quadruple_sums: dimension mismatch");
  const std::vector<double> r = detail::distances(pts, x.data());
  QuadSums s;
  for (std::size_t iy = 0; iy < pts.size(); ++iy) {
    const QuadSums row = detail::quad_row(pts, x.data(), r, alpha, iy);
    s.q1 += row.q1;
    s.q2 += row.q2;
    s.q3 += row.q3;
  }
  return s;
}

}  // namespace rlab::kernels
