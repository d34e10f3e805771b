#include <omp.h>

#include <cstdint>
#include <vector>

#include "kernel_point.hpp"
#include "rlab/errors.hpp"
#include "rlab/kernels.hpp"

namespace rlab::kernels {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

void combine_pairwise(std::vector<MomentSums>& parts) {
  // in-place tree: stride doubles each level, combination order fixed by index
  for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) parts[i] += parts[i + stride];
  }
}

}  // namespace

MomentSums accumulate_moments_parallel(const PointSet& pts, std::span<const double> x,
                                       double alpha, Kernel kernel, std::size_t skip,
                                       std::size_t chunk) {
  const std::size_t n = pts.dim;
  if (x.size() != n) throw UsageError("accumulate_moments: dimension mismatch");
  if (chunk == 0) throw UsageError("accumulate_moments: chunk must be positive");
  const std::size_t count = pts.size();
  const std::size_t chunks = count == 0 ? 1 : (count + chunk - 1) / chunk;
  std::vector<MomentSums> parts(chunks, MomentSums(n));

#pragma omp parallel
  {
    std::vector<double> d(n);
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      MomentSums& acc = parts[static_cast<std::size_t>(c)];
      for (std::size_t i = begin; i < end; ++i) {
        if (i == skip) continue;
        detail::add_point(acc, pts.point(i), pts.weights[i], x.data(), n, alpha, kernel, d.data());
      }
    }
  }
  combine_pairwise(parts);
  return std::move(parts.front());
}

QuadSums quadruple_sums_parallel(const PointSet& pts, std::span<const double> x, double alpha) {
  if (x.size() != pts.dim) throw UsageError("quadruple_sums: dimension mismatch");
  const std::vector<double> r = detail::distances(pts, x.data());
  const std::size_t N = pts.size();
  std::vector<double> q1(N), q2(N), q3(N);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t iy = 0; iy < static_cast<std::int64_t>(N); ++iy) {
    const QuadSums row = detail::quad_row(pts, x.data(), r, alpha, static_cast<std::size_t>(iy));
    q1[static_cast<std::size_t>(iy)] = row.q1;
    q2[static_cast<std::size_t>(iy)] = row.q2;
    q3[static_cast<std::size_t>(iy)] = row.q3;
  }
  return {pairwise_sum(q1), pairwise_sum(q2), pairwise_sum(q3)};
}

}  // namespace rlab::kernels
