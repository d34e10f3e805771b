#pragma once

#include <cmath>
#include <cstddef>

#include "rlab/kernels.hpp"

namespace rlab::kernels::detail {

// Adds one point's contribution to `acc`. Shared by the serial and OpenMP
// drivers so both evaluate identical per-point arithmetic.
inline void add_point(MomentSums& acc, const double* y, double w, const double* x, std::size_t n,
                      double alpha, Kernel kernel, double* d) {
  double r2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = x[k] - y[k];
    r2 += d[k] * d[k];
  }
  if (r2 == 0.0) {
    acc.hit_singularity = true;
    return;
  }
  if (w == 0.0) return;
  const double r = std::sqrt(r2);
  const double inv_r2 = 1.0 / r2;
  // r^{-(alpha+2)}
  const double k2 = kernel == Kernel::Log ? inv_r2 : std::pow(r, -alpha) * inv_r2;
  const double k0 = kernel == Kernel::Log ? std::log(r) : k2 * r2;
  const double k1 = k2 * r;
  const double k4 = k2 * inv_r2;
  acc.s0 += w * k0;
  acc.s1 += w * k1;
  acc.s2 += w * k2;
  std::size_t idx = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double wd = w * d[j];
    acc.v[j] += wd * k2;
    const double wdk = wd * k4;
    for (std::size_t k = j; k < n; ++k) acc.m[idx++] += wdk * d[k];
  }
}

}  // namespace rlab::kernels::detail

#include <vector>

namespace rlab::kernels::detail {

inline double dot_rel(const double* x, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += (x[k] - a[k]) * (x[k] - b[k]);
  return s;
}

inline std::vector<double> distances(const PointSet& pts, const double* x) {
  std::vector<double> r(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r[i] = std::sqrt(dot_rel(x, pts.point(i), pts.point(i), pts.dim));
  }
  return r;
}

// All (z, v, w) terms for a fixed outer index y, evaluated literally.
inline QuadSums quad_row(const PointSet& pts, const double* x, const std::vector<double>& r,
                         double alpha, std::size_t iy) {
  const std::size_t n = pts.dim;
  const std::size_t N = pts.size();
  const double* y = pts.point(iy);
  QuadSums s;
  for (std::size_t iz = 0; iz < N; ++iz) {
    const double* z = pts.point(iz);
    for (std::size_t iv = 0; iv < N; ++iv) {
      const double* v = pts.point(iv);
      const double zv = dot_rel(x, z, v, n);
      const double base = std::pow(r[iz], -(alpha + 2)) * std::pow(r[iv], -(alpha + 2));
      for (std::size_t iw = 0; iw < N; ++iw) {
        const double* w = pts.point(iw);
        const double weight = pts.weights[iy] * pts.weights[iz] * pts.weights[iv] * pts.weights[iw];
        s.q1 += weight * zv * base * std::pow(r[iy], -alpha) * std::pow(r[iw], -(alpha + 2));
        s.q2 += weight * dot_rel(x, z, w, n) * dot_rel(x, v, w, n) * base *
                std::pow(r[iy], -alpha) * std::pow(r[iw], -(alpha + 4));
        s.q3 += weight * dot_rel(x, y, w, n) * zv * base * std::pow(r[iy], -(alpha + 2)) *
                std::pow(r[iw], -(alpha + 2));
      }
    }
  }
  return s;
}

}  // namespace rlab::kernels::detail
