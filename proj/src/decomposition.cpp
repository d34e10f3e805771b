#include "rlab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rlab/cloud.hpp"
#include "rlab/errors.hpp"
#include "rlab/kernels.hpp"

namespace rlab {

namespace {

struct Coefficients {
  double c1, c2, c3;
};

Coefficients coefficients(const Params& params) {
  if (params.p_is_infinite()) throw DomainError("decomposition: p = inf has no I-expansion");
  const double a = params.alpha();
  const double a3 = a * a * a;
  const double n = static_cast<double>(params.n());
  return {a3 * (a + 4.0 - n - params.p()), (params.p() - 2.0) * a3 * (a + 2.0),
          (params.q() - 1.0) * a3 * a};
}

void check_cap(std::size_t count, std::size_t cap, const char* what) {
  if (count > cap) {
    throw ResourceError(std::string(what) + ": " + std::to_string(count) +
                        " atoms exceeds the brute-force cap of " + std::to_string(cap) +
                        "; use the factored path");
  }
}

// Per-atom displacement x - a_i and kernel powers.
struct Geometry {
  std::size_t n;
  std::vector<double> d;  // point-major
  std::vector<double> w;
  std::vector<double> r_a, r_a2, r_a4;  // r^{-a}, r^{-(a+2)}, r^{-(a+4)}

  Geometry(const PointSet& pts, const Vec& x, double alpha) : n(pts.dim), w(pts.weights) {
    const std::size_t N = pts.size();
    d.resize(N * n);
    r_a.resize(N);
    r_a2.resize(N);
    r_a4.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        d[i * n + k] = x[k] - pts.point(i)[k];
        r2 += d[i * n + k] * d[i * n + k];
      }
      if (r2 == 0.0) throw SingularityError("evaluation point coincides with a point mass");
      const double r = std::sqrt(r2);
      r_a[i] = std::pow(r, -alpha);
      r_a2[i] = r_a[i] / r2;
      r_a4[i] = r_a2[i] / r2;
    }
  }
  std::size_t size() const { return w.size(); }
  double dot(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += d[i * n + k] * d[j * n + k];
    return s;
  }
  double dist_sq(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double e = d[i * n + k] - d[j * n + k];
      s += e * e;
    }
    return s;
  }
};

// Sum over all (y, z, v, w) of term(y, z, v, w); parallel over y with a
// pairwise reduction of the per-y rows.
template <class Term>
double quadruple_sum(const Geometry& g, Term&& term) {
  const std::size_t N = g.size();
  std::vector<double> rows(N, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t iy = 0; iy < static_cast<std::int64_t>(N); ++iy) {
    const auto y = static_cast<std::size_t>(iy);
    double s = 0.0;
    for (std::size_t z = 0; z < N; ++z) {
      for (std::size_t v = 0; v < N; ++v) {
        for (std::size_t w = 0; w < N; ++w) s += term(y, z, v, w);
      }
    }
    rows[y] = s;
  }
  return kernels::pairwise_sum(rows);
}

}  // namespace

double DecompositionReport::scale() const {
  return std::max({std::abs(terms.I1), std::abs(terms.I2), std::abs(terms.I3), std::abs(I_total)});
}

Terms terms_factored(const MomentSet& mom, const Params& params) {
  const auto c = coefficients(params);
  const double v2 = mom.v_norm_sq();
  return {c.c1 * mom.s_alpha * mom.s_alpha2 * v2, c.c2 * mom.s_alpha * mom.v_m_v(),
          c.c3 * v2 * v2};
}

Terms terms_bruteforce(const AtomicMeasure& source, const Vec& x, const Params& params,
                       std::size_t cap, bool parallel) {
  check_cap(source.size(), cap, "terms_bruteforce");
  const auto c = coefficients(params);
  if (x.size() != source.dim()) throw UsageError("terms_bruteforce: dimension mismatch");
  for (const auto& a : source.atoms()) {
    if (a.location == x) throw SingularityError("evaluation point coincides with a point mass");
  }
  const auto q = parallel ? kernels::quadruple_sums_parallel(source.points(), x.span(), params.alpha())
                          : kernels::quadruple_sums_serial(source.points(), x.span(), params.alpha());
  return {c.c1 * q.q1, c.c2 * q.q2, c.c3 * q.q3};
}

LambdaSplit split_lambda(const Params& params) {
  if (params.p_is_infinite()) throw DomainError("split_lambda: p = inf");
  const double n = static_cast<double>(params.n());
  const double lambda = params.lambda();
  return {params.alpha() + 4.0 - n - params.p() - lambda, lambda};
}

Groups grouped_terms(const MomentSet& mom, const Params& params) {
  if (params.p_is_infinite()) throw DomainError("grouped_terms: p = inf");
  const double a = params.alpha();
  const double a3 = a * a * a;
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double q = params.q();
  const double v2 = mom.v_norm_sq();
  const double ss = mom.s_alpha * mom.s_alpha2;
  Groups g;
  g.I12_plus_I2 = a3 * params.lambda() * mom.s_alpha * (mom.s_alpha2 * v2 - mom.v_m_v());
  g.I11_plus_I3 = a3 * (a * (p - 2.0 + q) + (p - n)) * ss * v2 - (q - 1.0) * a3 * a * (ss - v2) * v2;
  return g;
}

Groups grouped_terms_bruteforce(const AtomicMeasure& source, const Vec& x, const Params& params,
                                std::size_t cap) {
  check_cap(source.size(), cap, "grouped_terms_bruteforce");
  if (params.p_is_infinite()) throw DomainError("grouped_terms_bruteforce: p = inf");
  const Geometry g(source.points(), x, params.alpha());
  const double a = params.alpha();
  const double a3 = a * a * a;
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double q = params.q();
  const double half_c = 0.5 * a3 * (a * (p - 2.0 + q) + (p - n));
  const double half_q = 0.5 * (q - 1.0) * a3 * a;
  const double lam = a3 * params.lambda();

  Groups out;
  out.I12_plus_I2 = lam * quadruple_sum(g, [&](std::size_t y, std::size_t z, std::size_t v,
                                               std::size_t w) {
    const double weight = g.w[y] * g.w[z] * g.w[v] * g.w[w];
    const double rw2 = g.dot(w, w);
    const double num = rw2 * g.dot(z, v) - g.dot(z, w) * g.dot(v, w);
    return weight * num * g.r_a[y] * g.r_a2[z] * g.r_a2[v] * g.r_a4[w];
  });
  out.I11_plus_I3 = quadruple_sum(g, [&](std::size_t y, std::size_t z, std::size_t v,
                                         std::size_t w) {
    const double weight = g.w[y] * g.w[z] * g.w[v] * g.w[w];
    const double zv = g.dot(z, v) * g.r_a2[z] * g.r_a2[v];
    const double sym = g.r_a[y] * g.r_a2[w] + g.r_a2[y] * g.r_a[w];
    const double polar = g.dist_sq(y, w) * g.r_a2[y] * g.r_a2[w];
    return weight * zv * (half_c * sym - half_q * polar);
  });
  return out;
}

double i11_tensor_sum(const AtomicMeasure& source, const Vec& x, double alpha, bool swapped,
                      std::size_t cap) {
  check_cap(source.size(), cap, "i11_tensor_sum");
  const Geometry g(source.points(), x, alpha);
  return quadruple_sum(g, [&](std::size_t y, std::size_t z, std::size_t v, std::size_t w) {
    const double weight = g.w[y] * g.w[z] * g.w[v] * g.w[w];
    const double outer = swapped ? g.r_a2[y] * g.r_a[w] : g.r_a[y] * g.r_a2[w];
    return weight * g.dot(z, v) * g.r_a2[z] * g.r_a2[v] * outer;
  });
}

double wedge_form(const SourceMeasure& source, const Vec& x, const Params& params,
                  std::size_t cap) {
  if (params.p_is_infinite()) throw DomainError("wedge_form: p = inf");
  const PointSet& pts = source_points(source);
  check_cap(pts.size(), cap, "wedge_form");
  if (x.size() != pts.dim) throw UsageError("wedge_form: dimension mismatch");
  const Geometry g(pts, x, params.alpha());
  const std::size_t N = g.size();
  const std::size_t n = g.n;
  auto disp = [&](std::size_t i) {
    return Vec(std::vector<double>(g.d.begin() + static_cast<std::ptrdiff_t>(i * n),
                                   g.d.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  };
  double s_alpha = 0.0;
  for (std::size_t i = 0; i < N; ++i) s_alpha += g.w[i] * g.r_a[i];

  std::vector<double> per_w(N, 0.0);
  for (std::size_t w = 0; w < N; ++w) {
    const Vec xw = disp(w);
    Bivector acc(n);
    for (std::size_t z = 0; z < N; ++z) {
      Bivector b = wedge(disp(z), xw);
      b *= g.w[z] * g.r_a2[z];
      acc += b;
    }
    per_w[w] = g.w[w] * g.r_a4[w] * inner(acc, acc);
  }
  const double a = params.alpha();
  return a * a * a * params.lambda() * s_alpha * kernels::pairwise_sum(per_w);
}

bool alpha_guard(const Params& params) { return params.alpha() > -2.0; }

DecompositionReport decompose(const SourceMeasure& source, const Vec& x, const Params& params,
                              DecompositionPath path, double rel_tol) {
  DecompositionReport rep;
  rep.x = x;
  rep.path = path;
  const MomentSet mom = compute_moments(source, x, params.alpha());
  rep.I_total = I_core(bundle_from_moments(mom), params);
  if (path == DecompositionPath::Factored) {
    rep.terms = terms_factored(mom, params);
    rep.groups = grouped_terms(mom, params);
  } else {
    const auto* atoms = std::get_if<AtomicMeasure>(&source);
    if (atoms == nullptr) throw UsageError("decompose: brute-force path needs an atomic source");
    rep.terms = terms_bruteforce(*atoms, x, params);
    rep.groups = grouped_terms_bruteforce(*atoms, x, params);
  }
  rep.residual_split = std::abs(rep.I_total - rep.terms.total());
  rep.residual_regroup = std::abs(rep.I_total - rep.groups.total());

  const Regime regime = classify_regime(params);
  rep.expected = expected_sign(regime.tag);
  rep.alpha_guard = alpha_guard(params);
  const double tol = rel_tol * rep.scale();
  auto ok = [&](double value) {
    if (!rep.expected) return true;
    return *rep.expected == ExpectedSign::NonNegative ? value >= -tol : value <= tol;
  };
  rep.group11_ok = ok(rep.groups.I11_plus_I3);
  rep.group12_ok = ok(rep.groups.I12_plus_I2);
  if (!rep.alpha_guard && rep.expected) {
    rep.direct_terms_ok = ok(rep.terms.I1) && ok(rep.terms.I2) && ok(rep.terms.I1 + rep.terms.I3);
  }
  return rep;
}

MonteCarloTerms terms_monte_carlo(const GriddedDensity& source, const Vec& x,
                                  const Params& params, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw UsageError("terms_monte_carlo: need at least two samples");
  const auto c = coefficients(params);
  const PointSet& pts = source.points();
  if (pts.size() == 0) throw UsageError("terms_monte_carlo: density is identically zero");
  const Geometry g(pts, x, params.alpha());
  const std::size_t N = g.size();

  std::vector<double> cdf(N);
  double mass = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    mass += g.w[i];
    cdf[i] = mass;
  }
  auto pick = [&](double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * mass);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), N - 1);
  };

  std::mt19937_64 rng(seed);
  const double start = unit_interval(rng());
  double sum[3] = {0, 0, 0};
  double sum_sq[3] = {0, 0, 0};
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t y = pick((static_cast<double>(s) + start) / static_cast<double>(samples));
    const std::size_t z = pick(unit_interval(rng()));
    const std::size_t v = pick(unit_interval(rng()));
    const std::size_t w = pick(unit_interval(rng()));
    const double zv = g.dot(z, v) * g.r_a2[z] * g.r_a2[v];
    const double f[3] = {c.c1 * zv * g.r_a[y] * g.r_a2[w],
                         c.c2 * g.dot(z, w) * g.dot(v, w) * g.r_a2[z] * g.r_a2[v] * g.r_a[y] * g.r_a4[w],
                         c.c3 * g.dot(y, w) * zv * g.r_a2[y] * g.r_a2[w]};
    for (int k = 0; k < 3; ++k) {
      sum[k] += f[k];
      sum_sq[k] += f[k] * f[k];
    }
  }
  const double ns = static_cast<double>(samples);
  const double m4 = mass * mass * mass * mass;
  double est[3], se[3];
  for (int k = 0; k < 3; ++k) {
    const double mean = sum[k] / ns;
    const double var = std::max(0.0, (sum_sq[k] / ns - mean * mean) * ns / (ns - 1.0));
    est[k] = m4 * mean;
    se[k] = m4 * std::sqrt(var / ns);
  }
  return {{est[0], est[1], est[2]}, {se[0], se[1], se[2]}, samples};
}

}  // namespace rlab
