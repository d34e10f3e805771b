#include <cmath>
#include <random>

#include <omp.h>

#include <doctest.h>

#include "oracles.hpp"
#include "rlab/kernels.hpp"

namespace k = rlab::kernels;

namespace {

rlab::PointSet random_points(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-1.0, 1.0), w(0.0, 1.0);
  rlab::PointSet pts;
  pts.dim = n;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& v : x) v = c(rng);
    pts.push_back(x.data(), w(rng));
  }
  return pts;
}

bool same_bits(const k::MomentSums& a, const k::MomentSums& b) {
  return a.s0 == b.s0 && a.s1 == b.s1 && a.s2 == b.s2 && a.v == b.v && a.m == b.m;
}

}  // namespace

TEST_CASE("parallel moments agree with the serial pass") {
  const auto pts = random_points(3, 20000, 11);
  const std::vector<double> x{2.5, -0.3, 0.7};
  for (auto kernel : {k::Kernel::Power, k::Kernel::Log}) {
    const auto s = k::accumulate_moments_serial(pts, x, 0.7, kernel);
    const auto p = k::accumulate_moments_parallel(pts, x, 0.7, kernel);
    CHECK(oracle::rel_err(p.s0, s.s0) <= 1e-13);
    CHECK(oracle::rel_err(p.s1, s.s1) <= 1e-13);
    CHECK(oracle::rel_err(p.s2, s.s2) <= 1e-13);
    for (std::size_t i = 0; i < 3; ++i) CHECK(oracle::rel_err(p.v[i], s.v[i], 1e-3) <= 1e-13);
    for (std::size_t i = 0; i < 6; ++i) CHECK(oracle::rel_err(p.m[i], s.m[i], 1e-3) <= 1e-13);
  }
}

TEST_CASE("parallel moments are bitwise independent of the thread count") {
  const auto pts = random_points(4, 30000, 5);
  const std::vector<double> x{1.5, 1.5, 0.0, -2.0};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = k::accumulate_moments_parallel(pts, x, 1.3, k::Kernel::Power);
  for (int threads : {2, 3, 4}) {
    omp_set_num_threads(threads);
    CHECK(same_bits(one, k::accumulate_moments_parallel(pts, x, 1.3, k::Kernel::Power)));
  }
  omp_set_num_threads(saved);
}

TEST_CASE("skip and singularity flag") {
  rlab::PointSet pts;
  pts.dim = 3;
  const double a[3] = {0, 0, 0}, b[3] = {1, 0, 0};
  pts.push_back(a, 1.0);
  pts.push_back(b, 2.0);
  const std::vector<double> x{0, 0, 0};
  CHECK(k::accumulate_moments_serial(pts, x, 1.0, k::Kernel::Power).hit_singularity);
  const auto skipped = k::accumulate_moments_serial(pts, x, 1.0, k::Kernel::Power, 0);
  CHECK_FALSE(skipped.hit_singularity);
  CHECK(skipped.s0 == 2.0);
  CHECK(skipped.s2 == 2.0);
  CHECK(skipped.v[0] == -2.0);
}

TEST_CASE("one-point moments") {
  rlab::PointSet pts;
  pts.dim = 3;
  const double a[3] = {0, 0, 0};
  pts.push_back(a, 1.0);
  const std::vector<double> x{2, 0, 0};
  const auto m = k::accumulate_moments_serial(pts, x, 1.0, k::Kernel::Power);
  CHECK(m.s0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.s1 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.s2 == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(m.v[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.m[0] == doctest::Approx(0.125).epsilon(1e-15));
  const auto lg = k::accumulate_moments_serial(pts, x, 0.0, k::Kernel::Log);
  CHECK(lg.s0 == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("quadruple sums: serial, parallel and thread count") {
  const auto pts = random_points(3, 9, 21);
  const std::vector<double> x{1.7, 0.4, -1.2};
  const auto s = k::quadruple_sums_serial(pts, x, 0.6);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto p1 = k::quadruple_sums_parallel(pts, x, 0.6);
  omp_set_num_threads(3);
  const auto p3 = k::quadruple_sums_parallel(pts, x, 0.6);
  omp_set_num_threads(saved);
  CHECK(p1.q1 == p3.q1);
  CHECK(p1.q2 == p3.q2);
  CHECK(p1.q3 == p3.q3);
  CHECK(oracle::rel_err(p1.q1, s.q1) <= 1e-13);
  CHECK(oracle::rel_err(p1.q2, s.q2) <= 1e-13);
  CHECK(oracle::rel_err(p1.q3, s.q3) <= 1e-13);
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(k::pairwise_sum(v) == 500500.0);
  CHECK(k::pairwise_sum(std::span<const double>()) == 0.0);
  const std::vector<double> one{3.5};
  CHECK(k::pairwise_sum(one) == 3.5);
}
