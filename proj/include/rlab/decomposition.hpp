#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rlab/operator_lq.hpp"
#include "rlab/params.hpp"
#include "rlab/potential.hpp"
#include "rlab/sources.hpp"

namespace rlab {

/// I = I1 + I2 + I3 with
///   I1 = a^3 (a+4-n-p)    * S_a S_{a+2} |V|^2
///   I2 = (p-2) a^3 (a+2)  * S_a V^T M V
///   I3 = (q-1) a^4        * |V|^4
struct Terms {
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
  double total() const { return I1 + I2 + I3; }
};

/// I = (I11 + I3) + (I12 + I2) after splitting I1's coefficient with lambda.
struct Groups {
  double I11_plus_I3 = 0.0;
  double I12_plus_I2 = 0.0;
  double total() const { return I11_plus_I3 + I12_plus_I2; }
};

struct LambdaSplit {
  double coeff_I11;  // a+4-n-p-lambda = a(p-1) + (p-n)
  double coeff_I12;  // lambda
};

enum class DecompositionPath { Factored, BruteForce };

struct DecompositionReport {
  Vec x;
  Terms terms;
  Groups groups;
  double I_total = 0.0;  // I_core of the derivative bundle
  double residual_split = 0.0;
  double residual_regroup = 0.0;
  DecompositionPath path = DecompositionPath::Factored;
  std::optional<ExpectedSign> expected;
  bool group11_ok = true;
  bool group12_ok = true;
  bool alpha_guard = true;
  /// For alpha <= -2: I1 >= 0, I2 >= 0 and I1 + I3 >= 0.
  std::optional<bool> direct_terms_ok;

  /// max(|I1|, |I2|, |I3|, |I_total|): the cancellation scale for residuals.
  double scale() const;
};

Terms terms_factored(const MomentSet& mom, const Params& params);

/// Literal O(N^4) sums over atom quadruples (y, z, v, w).
Terms terms_bruteforce(const AtomicMeasure& source, const Vec& x, const Params& params,
                       std::size_t cap = 16, bool parallel = true);

LambdaSplit split_lambda(const Params& params);

/// I12+I2 = a^3 lambda S_a (S_{a+2}|V|^2 - V^T M V)
/// I11+I3 = a^3 (a(p-2+q)+(p-n)) S_a S_{a+2}|V|^2 - (q-1) a^4 (S_a S_{a+2} - |V|^2) |V|^2
Groups grouped_terms(const MomentSet& mom, const Params& params);

/// The regrouped forms evaluated literally as quadruple sums: the symmetrized
/// I11 halves, the |y-w|^2 polarization term, and the combined I12+I2 integrand.
Groups grouped_terms_bruteforce(const AtomicMeasure& source, const Vec& x, const Params& params,
                                std::size_t cap = 16);

/// Base quadruple sum of I11 (no coefficient). swapped = true exchanges the
/// roles of y and w (exponent a on w, a+2 on y).
double i11_tensor_sum(const AtomicMeasure& source, const Vec& x, double alpha, bool swapped,
                      std::size_t cap = 16);

/// I12+I2 via explicit 2-vectors:
/// a^3 lambda S_a sum_w rho_w |x-w|^{-(a+4)} |sum_z rho_z (x-z)^(x-w) |x-z|^{-(a+2)}|^2.
double wedge_form(const SourceMeasure& source, const Vec& x, const Params& params,
                  std::size_t cap = 4096);

/// true iff alpha > -2 (then lambda <= 0 and the grouped sign argument applies).
bool alpha_guard(const Params& params);

DecompositionReport decompose(const SourceMeasure& source, const Vec& x, const Params& params,
                              DecompositionPath path = DecompositionPath::Factored,
                              double rel_tol = 1e-10);

struct MonteCarloTerms {
  Terms estimate;
  Terms std_error;
  std::size_t samples = 0;
};

/// Importance-sampled quadruple sums over a gridded density: tuples drawn with
/// probability proportional to cell mass, the outer index stratified
/// systematically. Estimates the same discrete sums the factored path computes.
MonteCarloTerms terms_monte_carlo(const GriddedDensity& source, const Vec& x,
                                  const Params& params, std::size_t samples = 1000000,
                                  std::uint64_t seed = 1);

}  // namespace rlab
