#include "rlab/potential.hpp"

#include <omp.h>

#include <cmath>
#include <functional>
#include <string>

#include "rlab/errors.hpp"
#include "rlab/kernels.hpp"

namespace rlab {

namespace {

constexpr std::size_t kParallelThreshold = 8192;
constexpr std::size_t kSubgridPerAxis = 6;

kernels::MomentSums accumulate(const PointSet& pts, const Vec& x, double alpha,
                               kernels::Kernel kernel, std::size_t skip = kernels::kNoSkip) {
  if (pts.size() >= kParallelThreshold && !omp_in_parallel()) {
    return kernels::accumulate_moments_parallel(pts, x.span(), alpha, kernel, skip);
  }
  return kernels::accumulate_moments_serial(pts, x.span(), alpha, kernel, skip);
}

// Midpoint subgrid of one cell, carrying the cell's mass.
PointSet cell_subgrid(const GriddedDensity& g, std::size_t cell) {
  const std::size_t n = g.dim();
  const double h = g.h();
  const double sub = h / static_cast<double>(kSubgridPerAxis);
  const Vec center = g.grid().cell_center(cell);
  std::size_t count = 1;
  for (std::size_t k = 0; k < n; ++k) count *= kSubgridPerAxis;
  const double w = g.value_at_cell(cell) * std::pow(sub, static_cast<double>(n));

  PointSet ps;
  ps.dim = n;
  ps.coords.reserve(count * n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = rest % kSubgridPerAxis;
      rest /= kSubgridPerAxis;
      y[k] = center[k] - 0.5 * h + (static_cast<double>(j) + 0.5) * sub;
    }
    ps.push_back(y.data(), w);
  }
  return ps;
}

kernels::MomentSums gridded_sums(const GriddedDensity& g, const Vec& x, double alpha,
                                 kernels::Kernel kernel) {
  const auto cell = g.grid().locate(x);
  if (cell && kernel == kernels::Kernel::Power &&
      alpha >= static_cast<double>(g.dim()) - 2.0) {
    throw IntegrabilityError("compute_moments: alpha = " + std::to_string(alpha) +
                             " >= n-2 makes the derivative integrals diverge inside the support");
  }
  const std::int64_t slot = cell ? g.slot_of_cell(*cell) : -1;
  if (slot < 0) return accumulate(g.points(), x, alpha, kernel);

  auto sums = accumulate(g.points(), x, alpha, kernel, static_cast<std::size_t>(slot));
  sums += kernels::accumulate_moments_serial(cell_subgrid(g, *cell), x.span(), alpha, kernel);
  return sums;
}

kernels::MomentSums source_sums(const SourceMeasure& source, const Vec& x, double alpha,
                                kernels::Kernel kernel) {
  if (x.size() != source_dim(source)) {
    throw UsageError("evaluation point has dimension " + std::to_string(x.size()) +
                     ", source has " + std::to_string(source_dim(source)));
  }
  if (!x.all_finite()) throw UsageError("evaluation point is not finite");
  kernels::MomentSums sums =
      std::holds_alternative<AtomicMeasure>(source)
          ? accumulate(std::get<AtomicMeasure>(source).points(), x, alpha, kernel)
          : gridded_sums(std::get<GriddedDensity>(source), x, alpha, kernel);
  if (sums.hit_singularity) {
    throw SingularityError("evaluation point coincides with a point mass");
  }
  return sums;
}

SymMatrix packed_to_matrix(std::size_t n, const std::vector<double>& packed) {
  SymMatrix m(n);
  std::copy(packed.begin(), packed.end(), m.packed().begin());
  return m;
}

}  // namespace

MomentSet compute_moments(const SourceMeasure& source, const Vec& x, double alpha) {
  if (!std::isfinite(alpha)) throw UsageError("compute_moments: alpha must be finite");
  const auto sums = source_sums(source, x, alpha, kernels::Kernel::Power);
  MomentSet mom;
  mom.x = x;
  mom.alpha = alpha;
  mom.s_alpha = sums.s0;
  mom.s_alpha1 = sums.s1;
  mom.s_alpha2 = sums.s2;
  mom.v = Vec(sums.v);
  mom.m = packed_to_matrix(x.size(), sums.m);
  return mom;
}

LogMomentSet compute_log_moments(const SourceMeasure& source, const Vec& x) {
  const auto sums = source_sums(source, x, 0.0, kernels::Kernel::Log);
  LogMomentSet mom;
  mom.x = x;
  mom.s_log = sums.s0;
  mom.s2 = sums.s2;
  mom.v = Vec(sums.v);
  mom.m = packed_to_matrix(x.size(), sums.m);
  return mom;
}

DerivativeBundle bundle_from_moments(const MomentSet& mom) {
  const double a = mom.alpha;
  const double n = static_cast<double>(mom.dim());
  DerivativeBundle b;
  b.u = mom.s_alpha;
  b.grad = (-a) * mom.v;
  b.hess = SymMatrix::identity(mom.dim(), -a * mom.s_alpha2) + (a * (a + 2.0)) * mom.m;
  b.lap = a * (a + 2.0 - n) * mom.s_alpha2;
  const double a3 = a * a * a;
  b.inf_lap = -a3 * mom.s_alpha2 * mom.v_norm_sq() + a3 * (a + 2.0) * mom.v_m_v();
  b.path = DerivativePath::Moment;
  return b;
}

DerivativeBundle bundle_from_log_moments(const LogMomentSet& mom, LogSign sign) {
  const double s = sign == LogSign::Plus ? 1.0 : -1.0;
  const double n = static_cast<double>(mom.x.size());
  DerivativeBundle b;
  b.u = s * mom.s_log;
  b.grad = s * mom.v;
  b.hess = s * (SymMatrix::identity(mom.x.size(), mom.s2) + (-2.0) * mom.m);
  b.lap = s * (n - 2.0) * mom.s2;
  b.inf_lap = s * (mom.s2 * norm_sq(mom.v) - 2.0 * mom.m.quad_form(mom.v));
  b.path = DerivativePath::Moment;
  return b;
}

double potential(const SourceMeasure& source, const Vec& x, double alpha) {
  return compute_moments(source, x, alpha).s_alpha;
}

Vec gradient(const SourceMeasure& source, const Vec& x, double alpha) {
  return (-alpha) * compute_moments(source, x, alpha).v;
}

SymMatrix hessian(const SourceMeasure& source, const Vec& x, double alpha) {
  return bundle_from_moments(compute_moments(source, x, alpha)).hess;
}

double laplacian(const SourceMeasure& source, const Vec& x, double alpha) {
  return bundle_from_moments(compute_moments(source, x, alpha)).lap;
}

double inf_laplacian(const SourceMeasure& source, const Vec& x, double alpha) {
  return bundle_from_moments(compute_moments(source, x, alpha)).inf_lap;
}

DerivativeBundle derivative_bundle(const SourceMeasure& source, const Vec& x, double alpha) {
  return bundle_from_moments(compute_moments(source, x, alpha));
}

DerivativeBundle log_potential_bundle(const SourceMeasure& source, const Vec& x, LogSign sign) {
  return bundle_from_log_moments(compute_log_moments(source, x), sign);
}

namespace {

struct FdResult {
  double u;
  Vec grad;
  SymMatrix hess;
};

FdResult central_differences(const std::function<double(const Vec&)>& f, const Vec& x,
                             double h) {
  const std::size_t n = x.size();
  FdResult r{f(x), Vec(n), SymMatrix(n)};
  auto shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
    Vec y = x;
    y[i] += si * h;
    y[j] += sj * h;
    return f(y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    Vec plus = x, minus = x;
    plus[i] += h;
    minus[i] -= h;
    const double fp = f(plus);
    const double fm = f(minus);
    r.grad[i] = (fp - fm) / (2.0 * h);
    r.hess.at(i, i) = (fp - 2.0 * r.u + fm) / (h * h);
    for (std::size_t j = i + 1; j < n; ++j) {
      r.hess.at(i, j) = (shifted(i, 1, j, 1) - shifted(i, 1, j, -1) - shifted(i, -1, j, 1) +
                         shifted(i, -1, j, -1)) /
                        (4.0 * h * h);
    }
  }
  return r;
}

DerivativeBundle fd_bundle(const std::function<double(const Vec&)>& f, const Vec& x,
                           double step) {
  if (step <= 0.0) step = 1e-4 * (1.0 + norm(x));
  const FdResult a = central_differences(f, x, step);
  const FdResult b = central_differences(f, x, 0.5 * step);

  // Richardson combination of the two central differences (fourth order).
  DerivativeBundle out;
  out.u = a.u;
  out.grad = (4.0 / 3.0) * b.grad - (1.0 / 3.0) * a.grad;
  out.hess = (4.0 / 3.0) * b.hess - (1.0 / 3.0) * a.hess;
  out.lap = out.hess.trace();
  out.inf_lap = out.hess.quad_form(out.grad);
  out.path = DerivativePath::FiniteDifference;

  // Truncation error shrinks 4x under halving; growth instead means rounding dominates.
  const double g_scale = std::max(norm(a.grad), 1e-300);
  const double h_scale = std::max(a.hess.frobenius_norm(), 1e-300);
  const double g_diff = norm(a.grad - b.grad) / g_scale;
  const double h_diff = (a.hess - b.hess).frobenius_norm() / h_scale;
  if (g_diff > 1e-6 || h_diff > 1e-3) {
    out.warning = "step " + std::to_string(step) +
                  " unreliable: step halving changes gradient by " + std::to_string(g_diff) +
                  " and Hessian by " + std::to_string(h_diff) + " (relative)";
  }
  return out;
}

}  // namespace

DerivativeBundle fd_oracle(const SourceMeasure& source, const Vec& x, double alpha, double step) {
  return fd_bundle([&](const Vec& y) { return potential(source, y, alpha); }, x, step);
}

DerivativeBundle fd_oracle_log(const SourceMeasure& source, const Vec& x, LogSign sign,
                               double step) {
  const double s = sign == LogSign::Plus ? 1.0 : -1.0;
  return fd_bundle([&](const Vec& y) { return s * compute_log_moments(source, y).s_log; }, x,
                   step);
}

}  // namespace rlab
