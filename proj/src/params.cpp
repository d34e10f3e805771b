#include "rlab/params.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "rlab/errors.hpp"

namespace rlab {

Params::Params(int n, double p, double q, double alpha) : n_(n), p_(p), q_(q), alpha_(alpha) {
  if (n < 3) throw UsageError("Params: dimension n must be >= 3, got " + std::to_string(n));
  if (std::isnan(p) || p < 2.0) throw UsageError("Params: p must be >= 2 (or inf)");
  if (!(q > 0.0) || !std::isfinite(q)) throw UsageError("Params: q must be positive and finite");
  if (!std::isfinite(alpha)) throw UsageError("Params: alpha must be finite");

  if (p_is_infinite()) {
    m_ = 1.0;
    gamma_ = 1.0;
    lambda_ = alpha > -2.0 ? -kInfinity : (alpha < -2.0 ? kInfinity : 0.0);
  } else {
    m_ = (p - 2.0 + q) / (p - 1.0);
    gamma_ = (p - static_cast<double>(n)) / (p - 2.0 + q);
    lambda_ = -(p - 2.0) * (alpha + 2.0);
  }
  if (!(m_ > 0.0)) throw UsageError("Params: derived m must be positive");
}

std::string Params::describe() const {
  std::ostringstream os;
  os << "n=" << n_ << " p=";
  if (p_is_infinite()) {
    os << "inf";
  } else {
    os << p_;
  }
  os << " q=" << q_ << " alpha=" << alpha_;
  return os.str();
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Case1Super: return "CASE1_SUPER";
    case RegimeTag::Case2Sub: return "CASE2_SUB";
    case RegimeTag::Case3Log: return "CASE3_LOG";
    case RegimeTag::InfSub: return "INF_SUB";
    case RegimeTag::Unsupported: return "UNSUPPORTED";
  }
  return "UNSUPPORTED";
}

double alpha_threshold(int n, double p, double q) {
  const double nd = static_cast<double>(n);
  if (p == nd) throw DomainError("alpha_threshold: undefined for p = n (logarithmic case)");
  if (std::isinf(p)) throw DomainError("alpha_threshold: undefined for p = inf");
  return (nd - p) / (p - 2.0 + q);
}

double alpha_threshold(const Params& params) {
  return alpha_threshold(params.n(), params.p(), params.q());
}

Regime classify_regime(const Params& params) {
  const double n = static_cast<double>(params.n());
  const double p = params.p();
  const double q = params.q();
  const double a = params.alpha();

  if (params.p_is_infinite()) {
    if (q > 1.0) return {RegimeTag::Unsupported, "p = inf requires 0 < q <= 1"};
    if (-a < 1.0) return {RegimeTag::Unsupported, "p = inf requires -alpha >= 1"};
    return {RegimeTag::InfSub, "p = inf, 0 < q <= 1, -alpha >= 1"};
  }
  if (p == n) return {RegimeTag::Case3Log, "p = n, q > 0 (logarithmic potential)"};

  const double threshold = (n - p) / (p - 2.0 + q);
  // boundary values are admissible; absorb rounding in user-typed thresholds
  const double slack = 1e-12 * std::abs(threshold);
  if (p < n) {
    if (q < 1.0) return {RegimeTag::Unsupported, "case (1) requires q >= 1 when 2 <= p < n"};
    if (!(a > 0.0)) return {RegimeTag::Unsupported, "case (1) requires alpha > 0"};
    if (a > threshold + slack) {
      return {RegimeTag::Unsupported,
              "case (1) requires alpha <= (n-p)/(p-2+q) = " + std::to_string(threshold)};
    }
    return {RegimeTag::Case1Super, "2 <= p < n, q >= 1, 0 < alpha <= (n-p)/(p-2+q)"};
  }
  if (q > 1.0) return {RegimeTag::Unsupported, "case (2) requires 0 < q <= 1 when p > n"};
  if (-a < -threshold - slack) {
    return {RegimeTag::Unsupported,
            "case (2) requires -alpha >= (p-n)/(p-2+q) = " + std::to_string(-threshold)};
  }
  return {RegimeTag::Case2Sub, "p > n, 0 < q <= 1, -alpha >= (p-n)/(p-2+q)"};
}

double parse_p(std::string_view text) {
  if (text == "inf" || text == "INF" || text == "infinity" || text == "Inf") {
    return Params::kInfinity;
  }
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw UsageError("cannot parse p value '" + s + "'");
  return v;
}

}  // namespace rlab
