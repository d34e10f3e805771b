#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rlab/potential.hpp"

namespace rlab {

/// (p-n)/(p-2+q), the exponent of the radial fundamental solution |x|^gamma.
double gamma_exponent(int n, double p, double q);

/// g^3 [(g+n-2) + (p-2)(g-1) + (q-1) g]: I evaluated on |x|^g is
/// coefficient_poly(g) * |x|^{4g-4}. Its nonzero root is gamma_exponent.
double coefficient_poly(double g, int n, double p, double q);

/// Closed-form bundle of u = |x|^g at x = r (1,...,1)/sqrt(n).
DerivativeBundle radial_power_bundle(int n, double g, double r);
/// u = log(1/|x|) at the same point.
DerivativeBundle radial_log_bundle(int n, double r);
/// u = (log(1/|x|))^{1/m}; requires 0 < r < 1.
DerivativeBundle radial_log_power_bundle(int n, double m, double r);

struct RadialResidual {
  double radius;
  double I_value;
  double scaled;  // I_value divided by the homogeneity scale of the check
};

/// I on |x|^g, scaled by r^{4g-4}.
std::vector<RadialResidual> radial_power_residual(const std::vector<double>& radii, int n,
                                                  double p, double q, double g);
/// radial_power_residual at g = gamma_exponent(n, p, q). Throws DomainError for p = n.
std::vector<RadialResidual> fs_residual(const std::vector<double>& radii, int n, double p,
                                        double q);
/// I on log(1/|x|) with p = n, scaled by |grad u|^4 = r^{-4}.
std::vector<RadialResidual> log_fs_residual(const std::vector<double>& radii, int n, double q);
/// I on (log(1/|x|))^{1/m} with p = n, scaled by the largest of
/// u |grad u|^2 ||D^2 u||_F and |grad u|^4. Radii must lie in (0, 1).
std::vector<RadialResidual> log_power_fs_residual(const std::vector<double>& radii, int n,
                                                  double q);

enum class TestFunction {
  PolynomialBump,   // (1 - r^2)^3 on r < 1
  ExponentialBump,  // exp(1 - 1/(1 - r^2)) on r < 1
  Shell,            // bump supported in 0.25 < r < 0.75 (vanishes near 0)
};

std::string_view to_string(TestFunction f);
TestFunction parse_test_function(std::string_view id);
double test_function_value(TestFunction f, double r);
double test_function_derivative(TestFunction f, double r);

/// Pairing of -L_{p,q}(c |x|^gamma) with a radial test function after
/// integration by parts:
///   c^{p+q-2} gamma |gamma|^{p-2} int |x|^{gamma(p+q-2)-p} <x, grad phi> dx,
/// reduced to a radial integral and evaluated by composite Simpson.
double weak_pairing(int n, double p, double q, double c, TestFunction f, int intervals = 10000);

/// c > 0 with weak_pairing(c) = phi(0). Exists only when gamma < 0 (p < n).
double normalizing_constant(int n, double p, double q, TestFunction f);

struct FsCheck {
  int n;
  double p;
  double q;
  bool log_case;
  double gamma;          // 0 in the log case
  double poly_at_gamma;  // 0 in the log case
  std::vector<RadialResidual> residuals;
  double weak_pairing_value;  // with c = 1; NaN in the log case
  double c_normalized;        // NaN when no positive normalization exists
  std::string test_function_id;
};

FsCheck fs_check(int n, double p, double q, const std::vector<double>& radii,
                 TestFunction f = TestFunction::PolynomialBump);

}  // namespace rlab
