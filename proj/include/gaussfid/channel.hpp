#pragma once

// The Gaussian channel Phi(rho) = \int d^2alpha G(alpha) D(alpha) rho D^dagger(alpha)
// applied to truncated density matrices. The deterministic route is a product
// Gauss-Hermite rule; the Monte-Carlo route samples G directly and serves as
// an independent oracle.

#include <cstdint>
#include <vector>

#include "gaussfid/fock.hpp"
#include "gaussfid/phasespace.hpp"

namespace gaussfid::channel {

using fock::DensityMatrix;
using phasespace::ChannelNoise;

inline constexpr int kDefaultQuadOrder = 40;
inline constexpr double kTraceDriftLimit = 1e-6;

struct QuadratureSpec {
  int order_per_axis = kDefaultQuadOrder;
  // Per-axis standard deviation (Re/Im alpha) of the node Gaussian. 0 selects
  // sqrt(gamma/4)/sqrt(1+gamma/2), the width of G(alpha) e^{-|alpha|^2}.
  double scale = 0.0;

  void validate() const;
  double resolved_scale(ChannelNoise noise) const;
};

struct McSpec {
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct KrausNode {
  double weight;
  Complex alpha;
};

/// Discrete Kraus set sqrt(w_j) D(alpha_j); weights are positive and sum to one.
std::vector<KrausNode> kraus_weights(ChannelNoise noise, QuadratureSpec quad = {});

DensityMatrix apply_channel(const DensityMatrix& rho, ChannelNoise noise, QuadratureSpec quad = {});

struct McResult {
  DensityMatrix rho;
  // Standard error of the sample mean, real and imaginary parts separately.
  Eigen::MatrixXcd std_error;
  std::int64_t samples;
};

// alpha_i ~ complex Gaussian with variance gamma/4 per axis, from a
// mt19937_64 seeded with mc.seed. Same seed, same output bits.
McResult apply_channel_mc(const DensityMatrix& rho, ChannelNoise noise, McSpec mc);

}  // namespace gaussfid::channel
