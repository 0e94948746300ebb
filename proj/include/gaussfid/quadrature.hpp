#pragma once

#include <vector>

#include "gaussfid/fock.hpp"
#include "gaussfid/phasespace.hpp"

namespace gaussfid::quadrature {

/// n-point Gauss-Hermite rule for \int f(t) e^{-t^2} dt.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

// Product rule for \int d^2alpha G(alpha) f(alpha), built on the Gaussian
// density N_s(alpha) with per-axis standard deviation `scale` (in Re/Im alpha):
//   \int G f = sum_j exp(log_weight_j) f(alpha_j),
//   log_weight_j = log(w_i w_k / pi) + log G(alpha_j) - log N_s(alpha_j).
// When scale^2 = gamma/4 the log ratio vanishes and the weights sum to one.
struct GaussianNodes {
  std::vector<Complex> alpha;
  std::vector<double> log_weight;
};

GaussianNodes gaussian_nodes(phasespace::ChannelNoise noise, int order_per_axis, double scale);

}  // namespace gaussfid::quadrature
