#include "rlab/operator_lq.hpp"

#include <cmath>
#include <limits>

#include "parallel_map.hpp"
#include "rlab/errors.hpp"

namespace rlab {

double I_core(const DerivativeBundle& b, const Params& params) {
  if (params.p_is_infinite()) throw DomainError("I_core: p = inf; use inf_sign_check");
  const double g2 = norm_sq(b.grad);
  return b.u * g2 * b.lap + (params.p() - 2.0) * b.u * b.inf_lap + (params.q() - 1.0) * g2 * g2;
}

namespace {

// |g|^{p-4} (|g|^2 lap + (p-2) inf_lap), the p-Laplacian of a function with
// gradient norm^2 g2, with its limit at g2 = 0.
double p_laplacian_pointwise(double g2, double lap, double inf_lap, double p) {
  if (g2 == 0.0) return p == 2.0 ? lap : 0.0;
  return std::pow(g2, 0.5 * (p - 4.0)) * (g2 * lap + (p - 2.0) * inf_lap);
}

}  // namespace

double L_pq(const DerivativeBundle& b, const Params& params) {
  if (params.p_is_infinite()) throw DomainError("L_pq: p = inf is not supported");
  if (!(b.u > 0.0)) throw DomainError("L_pq: requires u > 0, got " + std::to_string(b.u));
  const double p = params.p();
  const double q = params.q();
  const double g2 = norm_sq(b.grad);
  if (g2 == 0.0) return p == 2.0 ? std::pow(b.u, q - 1.0) * b.lap : 0.0;
  return std::pow(b.u, q - 2.0) * std::pow(g2, 0.5 * (p - 4.0)) * I_core(b, params);
}

double p_laplacian_of_power(const DerivativeBundle& b, const Params& params) {
  if (params.p_is_infinite()) throw DomainError("p_laplacian_of_power: p = inf");
  if (!(b.u > 0.0)) throw DomainError("p_laplacian_of_power: requires u > 0");
  const double m = params.m();
  const double u = b.u;
  const double g2 = norm_sq(b.grad);
  // v = u^m
  const double dv = m * std::pow(u, m - 1.0);
  const double v_g2 = dv * dv * g2;
  const double v_lap = dv * b.lap + m * (m - 1.0) * std::pow(u, m - 2.0) * g2;
  const double m3 = m * m * m;
  const double v_inf = m3 * std::pow(u, 3.0 * m - 3.0) * b.inf_lap +
                       m3 * (m - 1.0) * std::pow(u, 3.0 * m - 4.0) * g2 * g2;
  return p_laplacian_pointwise(v_g2, v_lap, v_inf, params.p());
}

std::string_view to_string(ExpectedSign s) {
  return s == ExpectedSign::NonNegative ? "NONNEGATIVE" : "NONPOSITIVE";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Informational: return "INFORMATIONAL";
  }
  return "INFORMATIONAL";
}

std::optional<ExpectedSign> expected_sign(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Case1Super: return ExpectedSign::NonPositive;
    case RegimeTag::Case2Sub: return ExpectedSign::NonNegative;
    case RegimeTag::InfSub: return ExpectedSign::NonNegative;
    default: return std::nullopt;
  }
}

double I_core_magnitude(const DerivativeBundle& b, const Params& params) {
  const double g2 = norm_sq(b.grad);
  return std::abs(b.u * g2 * b.lap) +
         std::abs((params.p() - 2.0) * b.u) * g2 * b.hess.frobenius_norm() +
         std::abs((params.q() - 1.0) * g2 * g2);
}

double inf_lap_magnitude(const DerivativeBundle& b) {
  return norm_sq(b.grad) * b.hess.frobenius_norm();
}

SignReport assemble_sign_report(std::string quantity, std::vector<Vec> points,
                                std::vector<double> values, std::optional<ExpectedSign> expected,
                                double rel_tol, const std::vector<double>& magnitudes) {
  if (!magnitudes.empty() && magnitudes.size() != values.size()) {
    throw UsageError("assemble_sign_report: magnitudes and values differ in length");
  }
  SignReport r;
  r.quantity = std::move(quantity);
  r.expected = expected;
  for (double v : values) r.scale = std::max(r.scale, std::abs(v));
  r.tolerance = rel_tol * r.scale;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const double tol =
        magnitudes.empty()
            ? r.tolerance
            : std::max(r.tolerance,
                       kRoundingUlps * std::numeric_limits<double>::epsilon() * magnitudes[i]);
    if (v >= -tol) ++r.nonnegative_count;
    if (v <= tol) ++r.nonpositive_count;
    if (!expected) continue;
    const double wrong = *expected == ExpectedSign::NonNegative ? -v : v;
    if (wrong > tol) {
      r.violations.push_back({i, v});
      r.max_abs_violation = std::max(r.max_abs_violation, std::abs(v));
    } else if (std::abs(v) > tol) {
      r.margin = std::min(r.margin, std::abs(v));
    }
  }
  if (!expected) {
    r.verdict = Verdict::Informational;
  } else {
    r.verdict = r.violations.empty() ? Verdict::Pass : Verdict::Fail;
  }
  r.points = std::move(points);
  r.values = std::move(values);
  return r;
}

SignReport certify_sign_at(const SourceMeasure& source, const Params& params,
                           std::vector<Vec> points, double rel_tol) {
  const Regime regime = classify_regime(params);
  switch (regime.tag) {
    case RegimeTag::Unsupported:
      throw UsageError("certify_sign: unsupported parameters (" + params.describe() +
                       "): " + regime.reason);
    case RegimeTag::InfSub:
      return inf_sign_check_at(source, params.alpha(), std::move(points), rel_tol);
    case RegimeTag::Case3Log: {
      auto values = detail::parallel_map(points.size(), [&](std::size_t i) {
        return I_core(log_potential_bundle(source, points[i], LogSign::Plus), params);
      });
      return assemble_sign_report("I", std::move(points), std::move(values), std::nullopt, rel_tol);
    }
    default: break;
  }
  const auto evals = detail::parallel_map(points.size(), [&](std::size_t i) {
    const auto b = derivative_bundle(source, points[i], params.alpha());
    return std::pair{I_core(b, params), I_core_magnitude(b, params)};
  });
  std::vector<double> values, magnitudes;
  for (const auto& [v, mag] : evals) {
    values.push_back(v);
    magnitudes.push_back(mag);
  }
  return assemble_sign_report("I", std::move(points), std::move(values),
                              expected_sign(regime.tag), rel_tol, magnitudes);
}

SignReport certify_sign(const SourceMeasure& source, const Params& params, const SampleSpec& spec,
                        double rel_tol) {
  const Regime regime = classify_regime(params);
  if (regime.tag == RegimeTag::Unsupported) {
    throw UsageError("certify_sign: unsupported parameters (" + params.describe() +
                     "): " + regime.reason);
  }
  if (regime.tag == RegimeTag::InfSub) return inf_sign_check(source, params.alpha(), spec, rel_tol);
  return certify_sign_at(source, params, make_cloud(source, spec), rel_tol);
}

std::pair<SignReport, SignReport> certify_log_conventions(const SourceMeasure& source,
                                                          const Params& params,
                                                          const SampleSpec& spec) {
  if (classify_regime(params).tag != RegimeTag::Case3Log) {
    throw UsageError("certify_log_conventions: requires p = n");
  }
  auto cloud = make_cloud(source, spec);
  auto run = [&](LogSign sign) {
    auto values = detail::parallel_map(cloud.size(), [&](std::size_t i) {
      return I_core(log_potential_bundle(source, cloud[i], sign), params);
    });
    return assemble_sign_report("I", cloud, std::move(values), std::nullopt, 1e-9);
  };
  return {run(LogSign::Plus), run(LogSign::Minus)};
}

SignReport inf_sign_check_at(const SourceMeasure& source, double alpha, std::vector<Vec> points,
                             double rel_tol) {
  if (-alpha < 1.0) {
    throw UsageError("inf_sign_check: requires -alpha >= 1, got alpha = " + std::to_string(alpha));
  }
  const auto evals = detail::parallel_map(points.size(), [&](std::size_t i) {
    const auto b = derivative_bundle(source, points[i], alpha);
    return std::pair{b.inf_lap, inf_lap_magnitude(b)};
  });
  std::vector<double> values, magnitudes;
  for (const auto& [v, mag] : evals) {
    values.push_back(v);
    magnitudes.push_back(mag);
  }
  return assemble_sign_report("inf_laplacian", std::move(points), std::move(values),
                              ExpectedSign::NonNegative, rel_tol, magnitudes);
}

SignReport inf_sign_check(const SourceMeasure& source, double alpha, const SampleSpec& spec,
                          double rel_tol) {
  if (-alpha < 1.0) {
    throw UsageError("inf_sign_check: requires -alpha >= 1, got alpha = " + std::to_string(alpha));
  }
  return inf_sign_check_at(source, alpha, make_cloud(source, spec), rel_tol);
}

}  // namespace rlab
