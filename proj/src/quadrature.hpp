#pragma once

#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace rlab::detail {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Full N-point Gauss-Legendre rule; Boost stores only the nonnegative half.
template <unsigned N>
Rule gauss_legendre() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  Rule r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
      continue;
    }
    r.nodes.push_back(x[i]);
    r.weights.push_back(w[i]);
    r.nodes.push_back(-x[i]);
    r.weights.push_back(w[i]);
  }
  return r;
}

}  // namespace rlab::detail
