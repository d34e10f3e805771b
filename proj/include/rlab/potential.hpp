#pragma once

#include <optional>
#include <string>

#include "rlab/core_math.hpp"
#include "rlab/sources.hpp"

namespace rlab {

/// Kernel moments of a source at x for u(x) = int rho(y) |x-y|^{-alpha} dy.
/// Every derivative of u, and every term of the I-decomposition, is a
/// polynomial in these.
struct MomentSet {
  Vec x;
  double alpha = 0.0;
  double s_alpha = 0.0;   // int rho |x-y|^{-alpha}
  double s_alpha1 = 0.0;  // int rho |x-y|^{-(alpha+1)}
  double s_alpha2 = 0.0;  // int rho |x-y|^{-(alpha+2)}
  Vec v;                  // int (x-y) rho |x-y|^{-(alpha+2)}
  SymMatrix m;            // int (x-y)(x-y)^T rho |x-y|^{-(alpha+4)}

  std::size_t dim() const { return x.size(); }
  double v_norm_sq() const { return norm_sq(v); }
  double v_m_v() const { return m.quad_form(v); }
};

/// Moments with the log kernel: s_alpha holds int rho log|x-y|, the others
/// are the alpha = 0 derivative moments.
struct LogMomentSet {
  Vec x;
  double s_log = 0.0;
  double s2 = 0.0;
  Vec v;
  SymMatrix m;
};

enum class DerivativePath { Moment, FiniteDifference };

struct DerivativeBundle {
  double u = 0.0;
  Vec grad;
  SymMatrix hess;
  double lap = 0.0;
  double inf_lap = 0.0;
  DerivativePath path = DerivativePath::Moment;
  /// Set by the finite-difference oracle when step halving disagrees.
  std::optional<std::string> warning;
};

/// Sign convention for the logarithmic potential.
enum class LogSign {
  Plus,   // u = int rho log|x-y|
  Minus,  // u = int rho log(1/|x-y|)
};

/// Exact sums for atomic sources; midpoint quadrature for gridded ones, with
/// the cell containing x replaced by a 6^n midpoint subgrid.
/// Throws SingularityError if x is an atom, IntegrabilityError for a gridded
/// source with alpha >= n-2 evaluated inside its grid box.
MomentSet compute_moments(const SourceMeasure& source, const Vec& x, double alpha);
LogMomentSet compute_log_moments(const SourceMeasure& source, const Vec& x);

DerivativeBundle bundle_from_moments(const MomentSet& mom);
DerivativeBundle bundle_from_log_moments(const LogMomentSet& mom, LogSign sign);

double potential(const SourceMeasure& source, const Vec& x, double alpha);
Vec gradient(const SourceMeasure& source, const Vec& x, double alpha);
SymMatrix hessian(const SourceMeasure& source, const Vec& x, double alpha);
double laplacian(const SourceMeasure& source, const Vec& x, double alpha);
double inf_laplacian(const SourceMeasure& source, const Vec& x, double alpha);
DerivativeBundle derivative_bundle(const SourceMeasure& source, const Vec& x, double alpha);

DerivativeBundle log_potential_bundle(const SourceMeasure& source, const Vec& x,
                                      LogSign sign = LogSign::Plus);

/// Central-difference gradient/Hessian of the potential (the independent
/// verification path). step <= 0 selects 1e-4 * (1 + |x|).
DerivativeBundle fd_oracle(const SourceMeasure& source, const Vec& x, double alpha,
                           double step = 0.0);
DerivativeBundle fd_oracle_log(const SourceMeasure& source, const Vec& x, LogSign sign,
                               double step = 0.0);

}  // namespace rlab
