#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rlab/decomposition.hpp"
#include "rlab/errors.hpp"

using rlab::AtomicMeasure;
using rlab::Params;
using rlab::Vec;

namespace {

double scale_of(const rlab::Terms& t) {
  return std::max({std::abs(t.I1), std::abs(t.I2), std::abs(t.I3), std::abs(t.total())});
}

}  // namespace

TEST_CASE("coefficient zeros") {
  std::mt19937_64 rng(3);
  const auto atoms = oracle::random_atoms(rng, 3, 4);
  const Vec x = oracle::random_point(rng, atoms, 2.0, 0.1);
  const auto m = rlab::compute_moments(atoms, x, 0.4);
  CHECK(rlab::terms_factored(m, Params(3, 2.0, 1.5, 0.4)).I2 == 0.0);
  CHECK(rlab::terms_factored(m, Params(3, 2.5, 1.0, 0.4)).I3 == 0.0);
}

TEST_CASE("terms of a single atom") {
  const AtomicMeasure atom({{1.0, Vec{0, 0, 0}}});
  const Params prm(3, 3.0, 2.0, 1.0);
  const auto t = rlab::terms_factored(rlab::compute_moments(atom, Vec{2, 0, 0}, 1.0), prm);
  // (1+4-3-3) * (1/2)(1/8)(1/16)
  CHECK(t.I1 == doctest::Approx(-1.0 / 256.0).epsilon(1e-14));
  CHECK(t.I2 == doctest::Approx(3.0 / 256.0).epsilon(1e-14));
  CHECK(t.I3 == doctest::Approx(1.0 / 256.0).epsilon(1e-14));
  const auto brute = rlab::terms_bruteforce(atom, Vec{2, 0, 0}, prm);
  CHECK(brute.I1 == doctest::Approx(t.I1).epsilon(1e-15));
  CHECK(brute.I2 == doctest::Approx(t.I2).epsilon(1e-15));
  CHECK(brute.I3 == doctest::Approx(t.I3).epsilon(1e-15));
  const double I = rlab::I_core(rlab::derivative_bundle(atom, Vec{2, 0, 0}, 1.0), prm);
  CHECK(I == doctest::Approx(t.total()).epsilon(1e-14));
}

TEST_CASE("brute force agrees with the factored terms") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const auto atoms = oracle::random_atoms(rng, n, 3);
    const Vec x = oracle::random_point(rng, atoms, 2.0, 0.05);
    const Params prm(static_cast<int>(n), 2.0 + 0.25 * (trial % 9), 0.5 + 0.1 * trial,
                     -1.5 + 0.11 * trial);
    const auto f = rlab::terms_factored(rlab::compute_moments(atoms, x, prm.alpha()), prm);
    const auto b = rlab::terms_bruteforce(atoms, x, prm);
    const double s = scale_of(f);
    CHECK(std::abs(f.I1 - b.I1) <= 1e-12 * s);
    CHECK(std::abs(f.I2 - b.I2) <= 1e-12 * s);
    CHECK(std::abs(f.I3 - b.I3) <= 1e-12 * s);
  }
}

TEST_CASE("brute force respects its cap") {
  std::mt19937_64 rng(2);
  const auto atoms = oracle::random_atoms(rng, 3, 17);
  CHECK_THROWS_AS(rlab::terms_bruteforce(atoms, Vec{5, 5, 5}, Params(3, 2.0, 1.0, 0.5)),
                  rlab::ResourceError);
}

TEST_CASE("Monte-Carlo quadruple sums over a gridded density") {
  const auto ball = rlab::uniform_ball_density(3, 1.0, 0.25);
  REQUIRE(ball.grid().cell_count() <= 10000);
  const Vec x{1.5, 0.2, 0.1};
  const Params prm(3, 3.0, 2.0, 0.4);
  const auto f = rlab::terms_factored(rlab::compute_moments(ball, x, prm.alpha()), prm);
  const auto mc = rlab::terms_monte_carlo(ball, x, prm, 1000000, 7);
  CHECK(mc.samples == 1000000);
  CHECK(std::abs(mc.estimate.I1 - f.I1) <= 3.0 * mc.std_error.I1);
  CHECK(std::abs(mc.estimate.I2 - f.I2) <= 3.0 * mc.std_error.I2);
  CHECK(std::abs(mc.estimate.I3 - f.I3) <= 3.0 * mc.std_error.I3);
  CHECK(mc.std_error.I1 < 0.05 * std::abs(f.I1));
}

TEST_CASE("split_lambda") {
  CHECK(rlab::split_lambda(Params(3, 2.0, 1.0, 0.5)).coeff_I12 == 0.0);
  const auto s = rlab::split_lambda(Params(3, 5.0, 1.0, -0.5));
  CHECK(s.coeff_I12 == doctest::Approx(-4.5));
  CHECK(s.coeff_I11 == doctest::Approx(0.0).scale(1.0));
  CHECK(s.coeff_I11 == doctest::Approx(-0.5 * 4.0 + 2.0).scale(1.0));
  const auto t = rlab::split_lambda(Params(3, 3.0, 2.0, 0.25));
  CHECK(t.coeff_I12 == doctest::Approx(-2.25));
  CHECK(t.coeff_I11 + t.coeff_I12 == doctest::Approx(0.25 + 4.0 - 3.0 - 3.0));
}

TEST_CASE("grouped terms") {
  std::mt19937_64 rng(23);
  const auto atoms = oracle::random_atoms(rng, 3, 5);
  const Vec x = oracle::random_point(rng, atoms, 2.0, 0.1);
  {
    const Params prm(3, 2.0, 1.0, 0.6);
    const auto m = rlab::compute_moments(atoms, x, 0.6);
    const auto g = rlab::grouped_terms(m, prm);
    CHECK(g.I12_plus_I2 == 0.0);
    CHECK(g.I11_plus_I3 == doctest::Approx(rlab::terms_factored(m, prm).I1).epsilon(1e-14));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const auto src = oracle::random_atoms(rng, n, 1 + trial % 8);
    const Vec y = oracle::random_point(rng, src, 2.0, 0.05);
    const Params prm(static_cast<int>(n), 2.0 + 0.3 * (trial % 11), 0.3 + 0.05 * trial,
                     -1.9 + 0.03 * trial);
    const auto m = rlab::compute_moments(src, y, prm.alpha());
    const auto t = rlab::terms_factored(m, prm);
    const auto g = rlab::grouped_terms(m, prm);
    CHECK(std::abs(g.total() - t.total()) <= 1e-10 * scale_of(t));
  }
}

TEST_CASE("group signs in both regimes") {
  std::mt19937_64 rng(29);
  const Params case1(3, 2.0, 2.0, 0.5), case2(3, 5.0, 1.0, -0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto src = oracle::random_atoms(rng, 3, 1 + trial % 6);
    const Vec y = oracle::random_point(rng, src, 2.5, 0.01);
    for (const auto& prm : {case1, case2}) {
      const auto rep = rlab::decompose(src, y, prm);
      CHECK(rep.group11_ok);
      CHECK(rep.group12_ok);
      CHECK(rep.alpha_guard);
      CHECK(rep.residual_regroup <= 1e-10 * rep.scale());
      CHECK(rep.residual_split <= 1e-10 * rep.scale());
    }
  }
}

TEST_CASE("regrouped forms as literal quadruple sums") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = oracle::random_atoms(rng, 3, 2 + trial % 5);
    const Vec y = oracle::random_point(rng, src, 2.0, 0.05);
    const Params prm(3, 2.0 + 0.5 * (trial % 5), 0.5 + 0.25 * (trial % 4), -1.5 + 0.15 * trial);
    const auto m = rlab::compute_moments(src, y, prm.alpha());
    const auto g = rlab::grouped_terms(m, prm);
    const auto gb = rlab::grouped_terms_bruteforce(src, y, prm);
    const double s = scale_of(rlab::terms_factored(m, prm));
    CHECK(std::abs(g.I11_plus_I3 - gb.I11_plus_I3) <= 1e-10 * s);
    CHECK(std::abs(g.I12_plus_I2 - gb.I12_plus_I2) <= 1e-10 * s);

    const double plain = rlab::i11_tensor_sum(src, y, prm.alpha(), false);
    const double swapped = rlab::i11_tensor_sum(src, y, prm.alpha(), true);
    CHECK(swapped == doctest::Approx(plain).epsilon(1e-12));
  }
}

TEST_CASE("wedge form") {
  const AtomicMeasure line({{1.0, Vec{1, 0, 0}}, {2.0, Vec{-0.5, 0, 0}}, {0.3, Vec{3, 0, 0}}});
  CHECK(rlab::wedge_form(line, Vec{0.2, 0, 0}, Params(3, 3.0, 2.0, 0.3)) == 0.0);

  std::mt19937_64 rng(41);
  const auto four = oracle::random_atoms(rng, 3, 4);
  const Vec x = oracle::random_point(rng, four, 2.0, 0.05);
  CHECK(rlab::wedge_form(four, x, Params(3, 2.0, 2.0, 0.3)) == 0.0);

  const Params prm(3, 3.0, 2.0, 0.3);
  const auto m = rlab::compute_moments(four, x, 0.3);
  const double g12 = rlab::grouped_terms(m, prm).I12_plus_I2;
  const double w = rlab::wedge_form(four, x, prm);
  const double s = scale_of(rlab::terms_factored(m, prm));
  CHECK(std::abs(w - g12) <= 1e-10 * s);
  CHECK(std::abs(oracle::wedge_components(four, x, 0.3, prm.lambda()) - w) <= 1e-12 * s);
}

TEST_CASE("alpha guard") {
  CHECK(rlab::alpha_guard(Params(3, 5.0, 1.0, -1.0)));
  CHECK_FALSE(rlab::alpha_guard(Params(3, 5.0, 1.0, -2.0)));
  const Params deep(3, 5.0, 1.0, -2.5);
  CHECK_FALSE(rlab::alpha_guard(deep));
  // all three coefficients: I1 and I2 carry positive coefficients, I3 none at q = 1
  const double a = deep.alpha();
  CHECK(a * a * a * (a + 4.0 - 3.0 - 5.0) > 0.0);
  CHECK(3.0 * a * a * a * (a + 2.0) > 0.0);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto src = oracle::random_atoms(rng, 3, 1 + trial % 5);
    const Vec y = oracle::random_point(rng, src, 2.0, 0.05);
    const auto rep = rlab::decompose(src, y, deep);
    REQUIRE(rep.direct_terms_ok.has_value());
    CHECK(*rep.direct_terms_ok);
    CHECK(rep.I_total >= -1e-10 * rep.scale());
  }
}

TEST_CASE("nonnegative base integrals") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + trial % 4;
    const auto src = oracle::random_atoms(rng, n, 1 + trial % 8);
    const Vec y = oracle::random_point(rng, src, 2.5, 0.02);
    const double alpha = -3.0 + 0.006 * trial;
    const auto m = rlab::compute_moments(src, y, alpha);
    const double v2 = m.v_norm_sq();
    const double vmv = m.v_m_v();
    CHECK(m.s_alpha * m.s_alpha2 * v2 >= 0.0);
    CHECK(vmv >= 0.0);
    CHECK(m.s_alpha2 * v2 - vmv >= -1e-13 * m.s_alpha2 * v2);
    CHECK(m.s_alpha * m.s_alpha2 - v2 >= -1e-13 * m.s_alpha * m.s_alpha2);
  }
}

TEST_CASE("brute-force decomposition path") {
  std::mt19937_64 rng(53);
  const auto src = oracle::random_atoms(rng, 3, 6);
  const Vec y = oracle::random_point(rng, src, 2.0, 0.05);
  const Params prm(3, 2.0, 2.0, 0.5);
  const auto f = rlab::decompose(src, y, prm);
  const auto b = rlab::decompose(src, y, prm, rlab::DecompositionPath::BruteForce);
  CHECK(b.path == rlab::DecompositionPath::BruteForce);
  CHECK(std::abs(f.groups.I11_plus_I3 - b.groups.I11_plus_I3) <= 1e-10 * f.scale());
  CHECK(b.residual_split <= 1e-10 * b.scale());
  const rlab::SourceMeasure ball = rlab::uniform_ball_density(3, 1.0, 0.25);
  CHECK_THROWS_AS(rlab::decompose(ball, Vec{2, 0, 0}, prm, rlab::DecompositionPath::BruteForce),
                  rlab::UsageError);
}
