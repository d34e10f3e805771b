#include "rlab/core_math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Vec Vec::unit(std::size_t n, std::size_t axis, double scale) {
  Vec v(n);
  v[axis] = scale;
  return v;
}

Vec& Vec::operator+=(const Vec& o) {
  require_same_dim(size(), o.size(), "Vec +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_dim(size(), o.size(), "Vec -=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

bool Vec::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }

double dot(const Vec& a, const Vec& b) {
  require_same_dim(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vec& a) { return dot(a, a); }
double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

std::size_t SymMatrix::packed_index(std::size_t n, std::size_t j, std::size_t k) {
  if (j > k) std::swap(j, k);
  // row j of the upper triangle starts after rows 0..j-1 of lengths n, n-1, ...
  return j * n - j * (j - 1) / 2 + (k - j);
}

SymMatrix SymMatrix::identity(std::size_t n, double scale) {
  SymMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) m.at(j, j) = scale;
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t j = 0; j < n_; ++j) t += (*this)(j, j);
  return t;
}

double SymMatrix::quad_form(const Vec& v) const {
  require_same_dim(n_, v.size(), "quad_form");
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    s += (*this)(j, j) * v[j] * v[j];
    for (std::size_t k = j + 1; k < n_; ++k) s += 2.0 * (*this)(j, k) * v[j] * v[k];
  }
  return s;
}

Vec SymMatrix::apply(const Vec& v) const {
  require_same_dim(n_, v.size(), "apply");
  Vec out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += (*this)(j, k) * v[k];
    out[j] = s;
  }
  return out;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    s += (*this)(j, j) * (*this)(j, j);
    for (std::size_t k = j + 1; k < n_; ++k) s += 2.0 * (*this)(j, k) * (*this)(j, k);
  }
  return std::sqrt(s);
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  require_same_dim(n_, o.n_, "SymMatrix +=");
  for (std::size_t i = 0; i < upper_.size(); ++i) upper_[i] += o.upper_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (auto& x : upper_) x *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a += (-1.0) * b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

double Bivector::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const double sign = i < j ? 1.0 : -1.0;
  if (i > j) std::swap(i, j);
  // pairs (i, j) with i < j enumerated row by row
  const std::size_t idx = i * n_ - i * (i + 1) / 2 + (j - i - 1);
  return sign * c_[idx];
}

Bivector& Bivector::operator+=(const Bivector& o) {
  require_same_dim(n_, o.n_, "Bivector +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Bivector& Bivector::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Bivector wedge(const Vec& u, const Vec& v) {
  require_same_dim(u.size(), v.size(), "wedge");
  const std::size_t n = u.size();
  Bivector b(n);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) b.c_[idx++] = u[i] * v[j] - u[j] * v[i];
  }
  return b;
}

double inner(const Bivector& a, const Bivector& b) {
  require_same_dim(a.dim(), b.dim(), "bivector inner");
  double s = 0.0;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

double lagrange_wedge_inner(const Vec& u, const Vec& v, const Vec& w) {
  require_same_dim(u.size(), v.size(), "lagrange_wedge_inner");
  require_same_dim(u.size(), w.size(), "lagrange_wedge_inner");
  return norm_sq(u) * dot(v, w) - dot(u, v) * dot(u, w);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  constexpr double g = 7.0;
  static constexpr std::array<double, 9> coeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); both factors positive on (0, 1/2).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = coeff[0];
  for (std::size_t i = 1; i < coeff.size(); ++i) a += coeff[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double riesz_constant(int n, double a) {
  if (n < 1) throw DomainError("riesz_constant: dimension must be positive");
  if (!(a > 0.0 && a < static_cast<double>(n))) {
    throw DomainError("riesz_constant: order must lie in (0, n), got " + std::to_string(a) +
                      " with n = " + std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  const double log_c = log_gamma(0.5 * (nd - a)) - 0.5 * nd * std::log(std::numbers::pi) -
                       a * std::numbers::ln2 - log_gamma(0.5 * a);
  return std::exp(log_c);
}

double unit_sphere_area(int n) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::exp(0.5 * nd * std::log(std::numbers::pi) - log_gamma(0.5 * nd));
}

}  // namespace rlab
