#include "rlab/fundamental.hpp"

#include <cmath>
#include <limits>

#include "rlab/errors.hpp"
#include "rlab/operator_lq.hpp"
#include "rlab/params.hpp"

namespace rlab {

double gamma_exponent(int n, double p, double q) {
  if (p == static_cast<double>(n)) {
    throw DomainError("gamma_exponent: p = n is the logarithmic case");
  }
  if (n < 3 || p < 2.0 || !(q > 0.0)) throw DomainError("gamma_exponent: need n>=3, p>=2, q>0");
  return (p - static_cast<double>(n)) / (p - 2.0 + q);
}

double coefficient_poly(double g, int n, double p, double q) {
  return g * g * g * ((g + static_cast<double>(n) - 2.0) + (p - 2.0) * (g - 1.0) + (q - 1.0) * g);
}

namespace {

Vec diagonal_point(int n, double r) {
  return Vec(static_cast<std::size_t>(n), r / std::sqrt(static_cast<double>(n)));
}

// Bundle of a radial f(|x|) from f, f', f'' at x = r * diagonal.
DerivativeBundle radial_bundle(int n, double r, double f, double f1, double f2) {
  const auto dim = static_cast<std::size_t>(n);
  const Vec x = diagonal_point(n, r);
  DerivativeBundle b;
  b.u = f;
  b.grad = (f1 / r) * x;
  // D^2 f(|x|) = (f'/r) I + (f'' - f'/r) x x^T / r^2
  b.hess = SymMatrix::identity(dim, f1 / r);
  const double c = (f2 - f1 / r) / (r * r);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j; k < dim; ++k) b.hess.at(j, k) += c * x[j] * x[k];
  }
  b.lap = b.hess.trace();
  b.inf_lap = b.hess.quad_form(b.grad);
  return b;
}

}  // namespace

DerivativeBundle radial_power_bundle(int n, double g, double r) {
  if (!(r > 0.0)) throw DomainError("radial_power_bundle: radius must be positive");
  return radial_bundle(n, r, std::pow(r, g), g * std::pow(r, g - 1.0),
                       g * (g - 1.0) * std::pow(r, g - 2.0));
}

DerivativeBundle radial_log_bundle(int n, double r) {
  if (!(r > 0.0)) throw DomainError("radial_log_bundle: radius must be positive");
  return radial_bundle(n, r, -std::log(r), -1.0 / r, 1.0 / (r * r));
}

DerivativeBundle radial_log_power_bundle(int n, double m, double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radial_log_power_bundle: need 0 < r < 1");
  const double k = 1.0 / m;
  const double L = -std::log(r);
  const double L1 = -1.0 / r;
  const double L2 = 1.0 / (r * r);
  const double f = std::pow(L, k);
  const double f1 = k * std::pow(L, k - 1.0) * L1;
  const double f2 = k * std::pow(L, k - 1.0) * L2 + k * (k - 1.0) * std::pow(L, k - 2.0) * L1 * L1;
  return radial_bundle(n, r, f, f1, f2);
}

std::vector<RadialResidual> radial_power_residual(const std::vector<double>& radii, int n,
                                                  double p, double q, double g) {
  const Params params(n, p, q, 0.0);
  std::vector<RadialResidual> out;
  for (double r : radii) {
    const double I = I_core(radial_power_bundle(n, g, r), params);
    out.push_back({r, I, I / std::pow(r, 4.0 * g - 4.0)});
  }
  return out;
}

std::vector<RadialResidual> fs_residual(const std::vector<double>& radii, int n, double p,
                                        double q) {
  return radial_power_residual(radii, n, p, q, gamma_exponent(n, p, q));
}

std::vector<RadialResidual> log_fs_residual(const std::vector<double>& radii, int n, double q) {
  const Params params(n, static_cast<double>(n), q, 0.0);
  std::vector<RadialResidual> out;
  for (double r : radii) {
    const double I = I_core(radial_log_bundle(n, r), params);
    out.push_back({r, I, I * std::pow(r, 4.0)});
  }
  return out;
}

std::vector<RadialResidual> log_power_fs_residual(const std::vector<double>& radii, int n,
                                                  double q) {
  const Params params(n, static_cast<double>(n), q, 0.0);
  std::vector<RadialResidual> out;
  for (double r : radii) {
    const DerivativeBundle b = radial_log_power_bundle(n, params.m(), r);
    const double g2 = norm_sq(b.grad);
    const double scale = std::max(std::abs(b.u) * g2 * b.hess.frobenius_norm(), g2 * g2);
    const double I = I_core(b, params);
    out.push_back({r, I, I / scale});
  }
  return out;
}

std::string_view to_string(TestFunction f) {
  switch (f) {
    case TestFunction::PolynomialBump: return "poly";
    case TestFunction::ExponentialBump: return "exp";
    case TestFunction::Shell: return "shell";
  }
  return "poly";
}

TestFunction parse_test_function(std::string_view id) {
  if (id == "poly") return TestFunction::PolynomialBump;
  if (id == "exp") return TestFunction::ExponentialBump;
  if (id == "shell") return TestFunction::Shell;
  throw UsageError("unknown test function '" + std::string(id) + "' (poly, exp, shell)");
}

double test_function_value(TestFunction f, double r) {
  switch (f) {
    case TestFunction::PolynomialBump: {
      if (r >= 1.0) return 0.0;
      const double s = 1.0 - r * r;
      return s * s * s;
    }
    case TestFunction::ExponentialBump:
      if (r >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - r * r));
    case TestFunction::Shell: {
      const double t = (r - 0.5) / 0.25;
      if (std::abs(t) >= 1.0) return 0.0;
      const double s = 1.0 - t * t;
      return s * s * s;
    }
  }
  return 0.0;
}

double test_function_derivative(TestFunction f, double r) {
  switch (f) {
    case TestFunction::PolynomialBump: {
      if (r >= 1.0) return 0.0;
      const double s = 1.0 - r * r;
      return -6.0 * r * s * s;
    }
    case TestFunction::ExponentialBump: {
      if (r >= 1.0) return 0.0;
      const double s = 1.0 - r * r;
      return std::exp(1.0 - 1.0 / s) * (-2.0 * r / (s * s));
    }
    case TestFunction::Shell: {
      const double t = (r - 0.5) / 0.25;
      if (std::abs(t) >= 1.0) return 0.0;
      const double s = 1.0 - t * t;
      return 3.0 * s * s * (-2.0 * t) / 0.25;
    }
  }
  return 0.0;
}

double weak_pairing(int n, double p, double q, double c, TestFunction f, int intervals) {
  if (!(c > 0.0)) throw DomainError("weak_pairing: c must be positive");
  if (intervals < 2 || intervals % 2 != 0) throw UsageError("weak_pairing: even interval count");
  const double g = gamma_exponent(n, p, q);
  const double nd = static_cast<double>(n);
  // |x|^{e} <x, grad phi> dx = r^{e} * r phi'(r) * r^{n-1} dr dS
  const double e = g * (p + q - 2.0) - p;
  const double radial_power = e + 1.0 + (nd - 1.0);
  // all built-in test functions are supported in [0, 1]
  const double R = 1.0;
  const double step = R / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double r = step * i;
    const double dphi = test_function_derivative(f, r);
    double val = 0.0;
    if (dphi != 0.0) {
      if (r == 0.0 && radial_power < 0.0) {
        throw QuadratureError("weak_pairing: integrand singular at the origin");
      }
      val = std::pow(r, radial_power) * dphi;
    }
    if (!std::isfinite(val)) throw QuadratureError("weak_pairing: non-integrable configuration");
    const double wgt = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += wgt * val;
  }
  const double integral = unit_sphere_area(n) * sum * step / 3.0;
  return std::pow(c, p + q - 2.0) * g * std::pow(std::abs(g), p - 2.0) * integral;
}

double normalizing_constant(int n, double p, double q, TestFunction f) {
  const double phi0 = test_function_value(f, 0.0);
  if (phi0 == 0.0) throw DomainError("normalizing_constant: test function vanishes at 0");
  const double unit = weak_pairing(n, p, q, 1.0, f);
  const double ratio = phi0 / unit;
  if (!(ratio > 0.0)) {
    throw DomainError("normalizing_constant: no positive c; gamma >= 0 reverses the sign of delta");
  }
  return std::pow(ratio, 1.0 / (p + q - 2.0));
}

FsCheck fs_check(int n, double p, double q, const std::vector<double>& radii, TestFunction f) {
  FsCheck out{n, p, q, false, 0.0, 0.0, {}, std::numeric_limits<double>::quiet_NaN(),
              std::numeric_limits<double>::quiet_NaN(), std::string(to_string(f))};
  if (p == static_cast<double>(n)) {
    out.log_case = true;
    out.residuals = log_fs_residual(radii, n, q);
    return out;
  }
  out.gamma = gamma_exponent(n, p, q);
  out.poly_at_gamma = coefficient_poly(out.gamma, n, p, q);
  out.residuals = fs_residual(radii, n, p, q);
  out.weak_pairing_value = weak_pairing(n, p, q, 1.0, f);
  if (out.gamma < 0.0) out.c_normalized = normalizing_constant(n, p, q, f);
  return out;
}

}  // namespace rlab
