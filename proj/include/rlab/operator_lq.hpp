#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlab/cloud.hpp"
#include "rlab/params.hpp"
#include "rlab/potential.hpp"

namespace rlab {

/// I = u |grad u|^2 lap u + (p-2) u inf_lap u + (q-1) |grad u|^4.
/// L_{p,q} u = u^{q-2} |grad u|^{p-4} I, so I carries the sign of L wherever
/// u > 0. Throws DomainError for p = inf.
double I_core(const DerivativeBundle& b, const Params& params);

/// div(u^{q-1} |grad u|^{p-2} grad u) from a pointwise bundle. At grad u = 0
/// the removable limit is used (u^{q-1} lap u for p = 2, else 0).
double L_pq(const DerivativeBundle& b, const Params& params);

/// Delta_p(u^m) with m = (p-2+q)/(p-1), built by the chain rule from the
/// bundle of u (independent of L_pq's algebra).
double p_laplacian_of_power(const DerivativeBundle& b, const Params& params);

enum class ExpectedSign { NonNegative, NonPositive };
enum class Verdict { Pass, Fail, Informational };

std::string_view to_string(ExpectedSign s);
std::string_view to_string(Verdict v);

struct SignViolation {
  std::size_t index;
  double value;
};

struct SignReport {
  std::string quantity;  // "I" or "inf_laplacian"
  std::vector<Vec> points;
  std::vector<double> values;
  std::optional<ExpectedSign> expected;
  std::vector<SignViolation> violations;
  double scale = 0.0;      // max |value| over the cloud
  double tolerance = 0.0;  // rel_tol * scale
  double max_abs_violation = 0.0;
  /// min |value| over non-violating points with |value| > tolerance (inf if none)
  double margin = 0.0;
  std::size_t nonnegative_count = 0;
  std::size_t nonpositive_count = 0;
  Verdict verdict = Verdict::Informational;

  bool passed() const { return verdict != Verdict::Fail; }
};

/// Classifies values against an expected sign with tolerance rel_tol * max|value|.
/// If `magnitudes` is given (one per value: the size of the terms that cancel
/// to produce it), a point's tolerance is raised to kRoundingUlps * eps *
/// magnitude when that is larger, so values that are exactly zero in exact
/// arithmetic are not counted as violations.
/// No expected sign gives an Informational report with sign counts only.
inline constexpr double kRoundingUlps = 64.0;
SignReport assemble_sign_report(std::string quantity, std::vector<Vec> points,
                                std::vector<double> values, std::optional<ExpectedSign> expected,
                                double rel_tol, const std::vector<double>& magnitudes = {});

/// Sum of the absolute sizes of the three terms of I_core at a bundle.
double I_core_magnitude(const DerivativeBundle& b, const Params& params);
/// |grad u|^2 * |hess u|_F, the size bound for inf_lap.
double inf_lap_magnitude(const DerivativeBundle& b);

/// Sign of I over a point cloud for in-regime parameters: <= 0 in the super
/// case, >= 0 in the sub case. The logarithmic case has no fixed expectation
/// and is reported (with the + log convention) as Informational; p = inf is
/// routed to inf_sign_check. Throws UsageError for unsupported parameters.
SignReport certify_sign(const SourceMeasure& source, const Params& params, const SampleSpec& spec,
                        double rel_tol = 1e-9);
SignReport certify_sign_at(const SourceMeasure& source, const Params& params,
                           std::vector<Vec> points, double rel_tol = 1e-9);

/// Both log-potential conventions over the same cloud (Informational).
std::pair<SignReport, SignReport> certify_log_conventions(const SourceMeasure& source,
                                                          const Params& params,
                                                          const SampleSpec& spec);

/// inf_lap u >= 0 over the cloud; requires -alpha >= 1.
SignReport inf_sign_check(const SourceMeasure& source, double alpha, const SampleSpec& spec,
                          double rel_tol = 1e-9);
SignReport inf_sign_check_at(const SourceMeasure& source, double alpha, std::vector<Vec> points,
                             double rel_tol = 1e-9);

std::optional<ExpectedSign> expected_sign(RegimeTag tag);

}  // namespace rlab
