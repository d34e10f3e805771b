#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rlab/errors.hpp"
#include "rlab/params.hpp"
#include "rlab/sources.hpp"

using rlab::AtomicMeasure;
using rlab::Params;
using rlab::RegimeTag;
using rlab::Vec;

TEST_CASE("Params derived quantities") {
  const Params a(3, 2.0, 2.0, 0.5);
  CHECK(a.m() == doctest::Approx(2.0));
  CHECK(a.gamma() == doctest::Approx(-0.5));
  CHECK(a.lambda() == 0.0);
  for (double p : {2.0, 2.5, 3.0, 4.0, 7.0}) {
    for (double q : {0.5, 1.0, 2.0, 3.0}) {
      for (int n : {3, 4, 5, 6}) {
        const Params prm(n, p, q, 0.3);
        CHECK(prm.m() > 0.0);
        CHECK(std::abs(prm.gamma() * (p - 2.0 + q) - (p - n)) <= 1e-14 * std::abs(p - n) + 1e-15);
        CHECK(prm.lambda() <= 0.0);
      }
    }
  }
  CHECK(Params(3, 5.0, 1.0, -0.5).lambda() == doctest::Approx(-4.5));
}

TEST_CASE("Params rejects inputs outside the standing assumptions") {
  CHECK_THROWS_AS(Params(2, 2.0, 1.0, 0.5), rlab::UsageError);
  CHECK_THROWS_AS(Params(3, 1.5, 1.0, 0.5), rlab::UsageError);
  CHECK_THROWS_AS(Params(3, 2.0, 0.0, 0.5), rlab::UsageError);
  CHECK_THROWS_AS(Params(3, 2.0, -1.0, 0.5), rlab::UsageError);
  CHECK_NOTHROW(Params(3, Params::kInfinity, 1.0, -1.0));
}

TEST_CASE("classify_regime examples") {
  CHECK(rlab::classify_regime(Params(3, 2.0, 1.0, 1.0)).tag == RegimeTag::Case1Super);
  CHECK(rlab::classify_regime(Params(3, 5.0, 1.0, -0.6)).tag == RegimeTag::Case2Sub);
  const auto bad = rlab::classify_regime(Params(3, 2.0, 0.5, 0.5));
  CHECK(bad.tag == RegimeTag::Unsupported);
  CHECK(bad.reason.find("q >= 1") != std::string::npos);
  CHECK(rlab::classify_regime(Params(3, 3.0, 0.7, 0.0)).tag == RegimeTag::Case3Log);
  CHECK(rlab::classify_regime(Params(3, Params::kInfinity, 1.0, -1.0)).tag == RegimeTag::InfSub);
  CHECK(rlab::classify_regime(Params(3, Params::kInfinity, 1.0, -0.5)).tag ==
        RegimeTag::Unsupported);
  // just past the case (1) threshold
  CHECK(rlab::classify_regime(Params(3, 2.0, 2.0, 0.51)).tag == RegimeTag::Unsupported);
  CHECK(rlab::classify_regime(Params(3, 5.0, 1.0, -0.4)).tag == RegimeTag::Unsupported);
}

TEST_CASE("alpha_threshold examples") {
  CHECK(rlab::alpha_threshold(3, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(rlab::alpha_threshold(3, 2.0, 2.0) == doctest::Approx(0.5));
  CHECK(rlab::alpha_threshold(3, 5.0, 1.0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(rlab::alpha_threshold(3, 3.0, 1.0), rlab::DomainError);
  // boundary values classify into their regime
  CHECK(rlab::classify_regime(Params(3, 2.5, 1.0, rlab::alpha_threshold(3, 2.5, 1.0))).tag ==
        RegimeTag::Case1Super);
  CHECK(rlab::classify_regime(Params(4, 6.0, 0.75, rlab::alpha_threshold(4, 6.0, 0.75))).tag ==
        RegimeTag::Case2Sub);
}

TEST_CASE("parse_p") {
  CHECK(std::isinf(rlab::parse_p("inf")));
  CHECK(std::isinf(rlab::parse_p("infinity")));
  CHECK(rlab::parse_p("2.5") == 2.5);
  CHECK_THROWS(rlab::parse_p("two"));
}

TEST_CASE("AtomicMeasure validation and mass") {
  const AtomicMeasure m({{2.0, Vec{0, 0, 0}}, {3.0, Vec{1, 0, 0}}});
  CHECK(m.total_mass() == 5.0);
  CHECK(rlab::total_mass(rlab::SourceMeasure(m)) == 5.0);
  CHECK(m.diameter() == doctest::Approx(1.0));
  CHECK_THROWS_AS(AtomicMeasure({}), rlab::UsageError);
  CHECK_THROWS_AS(AtomicMeasure({{-1.0, Vec{0, 0, 0}}}), rlab::UsageError);
  CHECK_THROWS_AS(AtomicMeasure({{1.0, Vec{0, 0, 0}}, {1.0, Vec{0, 0}}}), rlab::UsageError);
  CHECK_THROWS_AS(AtomicMeasure({{1.0, Vec{NAN, 0, 0}}}), rlab::UsageError);
}

TEST_CASE("GriddedDensity basics") {
  rlab::GridSpec g{Vec{0, 0, 0}, 0.5, {2, 2, 2}};
  const rlab::GriddedDensity zero(g, std::vector<double>(8, 0.0));
  CHECK(zero.total_mass() == 0.0);
  CHECK(zero.points().size() == 0);
  std::vector<double> v(8, 0.0);
  v[7] = 4.0;
  const rlab::GriddedDensity one(g, v);
  CHECK(one.total_mass() == doctest::Approx(0.5));
  CHECK(one.points().size() == 1);
  CHECK(one.slot_of_cell(7) == 0);
  CHECK(one.slot_of_cell(0) == -1);
  const Vec c = g.cell_center(7);
  CHECK(c[0] == 0.75);
  CHECK(c[2] == 0.75);
  CHECK(g.locate(Vec{0.9, 0.1, 0.6}).value() == 1 * 4 + 0 * 2 + 1);
  CHECK_FALSE(g.contains(Vec{1.1, 0.1, 0.1}));
  v[0] = -1.0;
  CHECK_THROWS_AS(rlab::GriddedDensity(g, v), rlab::UsageError);
  CHECK_THROWS_AS(rlab::GriddedDensity(g, std::vector<double>(7, 1.0)), rlab::UsageError);
}

TEST_CASE("mollify: single atom peak and mass") {
  const AtomicMeasure atom({{1.0, Vec{0, 0, 0}}});
  const double t = 0.01;
  const auto grid = rlab::mollifier_grid(atom, t);
  const auto rho = rlab::mollify(atom, t, grid);
  const auto center = grid.locate(Vec{0, 0, 0}).value();
  CHECK(oracle::rel_err(rho.value_at_cell(center), std::pow(4.0 * M_PI * t, -1.5)) <= 1e-12);
  double peak = 0.0;
  for (double v : rho.values()) peak = std::max(peak, v);
  CHECK(peak == rho.value_at_cell(center));
  CHECK(std::abs(rho.total_mass() - 1.0) <= 1e-6);

  const auto rho4 = rlab::mollify(atom, 0.04, rlab::mollifier_grid(atom, 0.04));
  CHECK(rho4.total_mass() >= 1.0 - 1e-6);
  CHECK(rho4.total_mass() <= 1.0 + 1e-6);
}

TEST_CASE("mollify: values against the heat kernel, positivity and radial decay") {
  const AtomicMeasure atom({{1.0, Vec{0, 0, 0}}});
  const double t = 0.02;
  const auto grid = rlab::mollifier_grid(atom, t);
  const auto rho = rlab::mollify(atom, t, grid);
  for (std::size_t i = 0; i < grid.cell_count(); i += 97) {
    const Vec y = grid.cell_center(i);
    CHECK(oracle::rel_err(rho.value_at_cell(i), oracle::heat_density(atom, y, t)) <= 1e-12);
    CHECK(rho.value_at_cell(i) > 0.0);
  }
  const std::size_t mid = grid.shape[0] / 2;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = mid; k < grid.shape[axis]; ++k) {
      Vec y = grid.cell_center(grid.locate(Vec{0, 0, 0}).value());
      y[axis] = grid.origin[axis] + (static_cast<double>(k) + 0.5) * grid.h;
      const double v = rho.value_at_cell(grid.locate(y).value());
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("mollify: swap symmetry of two equal atoms") {
  const AtomicMeasure pair({{1.0, Vec{-0.5, 0, 0}}, {1.0, Vec{0.5, 0, 0}}});
  const auto grid = rlab::mollifier_grid(pair, 0.03);
  const auto rho = rlab::mollify(pair, 0.03, grid);
  const std::size_t nx = grid.shape[0], ny = grid.shape[1], nz = grid.shape[2];
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; j += 3) {
      for (std::size_t k = 0; k < nz; k += 3) {
        const double a = rho.value_at_cell((i * ny + j) * nz + k);
        const double b = rho.value_at_cell(((nx - 1 - i) * ny + j) * nz + k);
        CHECK(oracle::rel_err(a, b) <= 1e-14);
      }
    }
  }
}

TEST_CASE("mollify: undersized grid names the padding") {
  const AtomicMeasure atom({{1.0, Vec{0, 0, 0}}});
  const auto small = rlab::GridSpec::covering(atom, 0.05, 0.2);
  try {
    (void)rlab::mollify(atom, 0.04, small);
    FAIL("expected ConfigError");
  } catch (const rlab::ConfigError& e) {
    CHECK(std::string(e.what()).find("pad the atoms by at least") != std::string::npos);
  }
  const auto coarse = rlab::GridSpec::covering(atom, 1.0, 3.0);
  CHECK_THROWS_AS(rlab::mollify(atom, 0.04, coarse), rlab::ConfigError);
}

TEST_CASE("mollify: heat semigroup") {
  // In the plane to keep the re-smoothing of the gridded density cheap.
  const AtomicMeasure mu({{1.0, Vec{-0.3, 0.1}}, {0.5, Vec{0.4, -0.2}}});
  const double t1 = 0.01, t2 = 0.04;
  const auto first = rlab::mollify(mu, t1, rlab::mollifier_grid(mu, t1, 4.0));
  const AtomicMeasure as_atoms = first.as_atoms();
  const auto grid = rlab::mollifier_grid(as_atoms, t2 - t1);
  const auto direct = rlab::mollify(mu, t2, grid);
  const auto composed = rlab::mollify(as_atoms, t2 - t1, grid);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    worst = std::max(worst, std::abs(direct.value_at_cell(i) - composed.value_at_cell(i)));
    peak = std::max(peak, direct.value_at_cell(i));
  }
  CHECK(worst <= 0.02 * peak);
}

TEST_CASE("uniform ball density") {
  const auto ball = rlab::uniform_ball_density(3, 1.0, 1.0 / 16.0);
  CHECK(oracle::rel_err(ball.total_mass(), 4.0 * M_PI / 3.0) <= 1e-8);
  for (double v : ball.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-15);
  }
  // disk area, and a 4-ball with an off-grid center and radius
  const auto disk = rlab::uniform_ball_density(2, 0.7, 0.05);
  CHECK(oracle::rel_err(disk.total_mass(), M_PI * 0.49) <= 1e-12);
  const auto ball4 = rlab::uniform_ball_density(4, 0.9, 0.1, 2.0, Vec{0.03, -0.02, 0.0, 0.01});
  CHECK(oracle::rel_err(ball4.total_mass(), 2.0 * 0.5 * M_PI * M_PI * std::pow(0.9, 4)) <= 1e-7);
  const auto segment = rlab::uniform_ball_density(1, 0.33, 0.1);
  CHECK(oracle::rel_err(segment.total_mass(), 0.66) <= 1e-14);
}
