#pragma once

#include <vector>

namespace deltasim {

/// Gauss-Hermite rule for the weight exp(-x^2): sum w_i f(x_i) ~ int f(x) exp(-x^2) dx.
struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // sum to sqrt(pi)
};

/// Rule with n nodes (n >= 1). Rules are computed once per n and cached.
const GaussHermiteRule& gauss_hermite(int n);

}  // namespace deltasim
