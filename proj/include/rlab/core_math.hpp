#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rlab {

/// Point or direction in R^n. The dimension is a runtime value.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0) : c_(n, fill) {}
  Vec(std::initializer_list<double> c) : c_(c) {}
  explicit Vec(std::vector<double> c) : c_(std::move(c)) {}

  static Vec unit(std::size_t n, std::size_t axis, double scale = 1.0);

  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const double* data() const { return c_.data(); }
  double* data() { return c_.data(); }
  std::span<const double> span() const { return c_; }
  const std::vector<double>& components() const { return c_; }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);

  bool all_finite() const;

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> c_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);

double dot(const Vec& a, const Vec& b);
double norm_sq(const Vec& a);
double norm(const Vec& a);

/// Symmetric n x n matrix stored as its upper triangle (row-major).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), upper_(n * (n + 1) / 2, 0.0) {}

  static SymMatrix identity(std::size_t n, double scale = 1.0);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t j, std::size_t k) const { return upper_[index(j, k)]; }
  double& at(std::size_t j, std::size_t k) { return upper_[index(j, k)]; }

  std::span<const double> packed() const { return upper_; }
  std::span<double> packed() { return upper_; }

  double trace() const;
  double quad_form(const Vec& v) const;
  Vec apply(const Vec& v) const;
  double frobenius_norm() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  static std::size_t packed_size(std::size_t n) { return n * (n + 1) / 2; }
  static std::size_t packed_index(std::size_t n, std::size_t j, std::size_t k);

 private:
  std::size_t index(std::size_t j, std::size_t k) const { return packed_index(n_, j, k); }

  std::size_t n_ = 0;
  std::vector<double> upper_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

/// Alternating 2-vector in Lambda^2 R^n, components on e_i ^ e_j for i < j.
class Bivector {
 public:
  explicit Bivector(std::size_t n) : n_(n), c_(n * (n - 1) / 2, 0.0) {}

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  std::span<const double> components() const { return c_; }

  Bivector& operator+=(const Bivector& o);
  Bivector& operator*=(double s);

  friend Bivector wedge(const Vec& u, const Vec& v);

 private:
  std::size_t n_;
  std::vector<double> c_;
};

Bivector wedge(const Vec& u, const Vec& v);

/// Induced inner product on Lambda^2 R^n.
double inner(const Bivector& a, const Bivector& b);

/// |U|^2 <V,W> - <U,V><U,W>, which equals <U^V, U^W>.
double lagrange_wedge_inner(const Vec& u, const Vec& v, const Vec& w);

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine terms).
double log_gamma(double x);

/// Gamma((n-a)/2) / (pi^{n/2} 2^a Gamma(a/2)), the Riesz normalization for 0 < a < n.
double riesz_constant(int n, double a);

/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

}  // namespace rlab
