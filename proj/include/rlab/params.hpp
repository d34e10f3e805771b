#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace rlab {

/// Parameter bundle (n, p, q, alpha) for the operator
/// L_{p,q} u = div(u^{q-1} |grad u|^{p-2} grad u) applied to
/// u(x) = int rho(y) |x-y|^{-alpha} dy.
///
/// p = +infinity is the distinguished infinity-Laplacian value. Construction
/// enforces n >= 3, p >= 2 and q > 0.
class Params {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  Params(int n, double p, double q, double alpha);

  int n() const { return n_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double alpha() const { return alpha_; }
  bool p_is_infinite() const { return p_ == kInfinity; }

  /// (p-2+q)/(p-1); 1 in the p -> infinity limit.
  double m() const { return m_; }
  /// (p-n)/(p-2+q); 1 in the p -> infinity limit.
  double gamma() const { return gamma_; }
  /// -(p-2)(alpha+2); -inf (or +inf for alpha < -2) when p is infinite.
  double lambda() const { return lambda_; }

  Params with_alpha(double alpha) const { return Params(n_, p_, q_, alpha); }

  std::string describe() const;

 private:
  int n_;
  double p_;
  double q_;
  double alpha_;
  double m_;
  double gamma_;
  double lambda_;
};

enum class RegimeTag { Case1Super, Case2Sub, Case3Log, InfSub, Unsupported };

struct Regime {
  RegimeTag tag;
  std::string reason;
};

std::string_view to_string(RegimeTag tag);

/// Which sign regime (if any) the parameters fall in.
Regime classify_regime(const Params& params);

/// (n-p)/(p-2+q): the largest admissible alpha in the super case, and minus
/// the smallest admissible -alpha in the sub case. Undefined at p = n.
double alpha_threshold(const Params& params);
double alpha_threshold(int n, double p, double q);

/// Parses a p value, accepting "inf" / "infinity".
double parse_p(std::string_view text);

}  // namespace rlab
