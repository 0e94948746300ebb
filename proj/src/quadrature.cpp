#include "gaussfid/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "gaussfid/errors.hpp"

namespace gaussfid::quadrature {

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) {
    throw DomainError("Gauss-Hermite order must be >= 1");
  }
  // Newton iteration on orthonormal Hermite polynomials, roots located from
  // the largest downwards (Numerical Recipes gauher).
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 100;
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps * std::max(1.0, std::abs(z))) {
        break;
      }
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
  }
  // Ascending order.
  std::vector<double> nodes(rule.nodes.rbegin(), rule.nodes.rend());
  std::vector<double> weights(rule.weights.rbegin(), rule.weights.rend());
  return {std::move(nodes), std::move(weights)};
}

GaussianNodes gaussian_nodes(phasespace::ChannelNoise noise, int order_per_axis, double scale) {
  if (!(scale > 0.0)) {
    throw DomainError("quadrature scale must be positive");
  }
  const double gamma = noise.gamma();
  if (!(gamma > 0.0)) {
    throw DomainError("Gaussian quadrature nodes need gamma > 0");
  }
  const GaussHermiteRule rule = gauss_hermite(order_per_axis);
  const double stretch = std::sqrt(2.0) * scale;
  const double var_g = 0.25 * gamma;      // per-axis variance of G
  const double var_q = scale * scale;     // per-axis variance of N_s
  const double log_norm = std::log(var_q / var_g);
  GaussianNodes out;
  const std::size_t count = static_cast<std::size_t>(order_per_axis) * order_per_axis;
  out.alpha.reserve(count);
  out.log_weight.reserve(count);
  for (int i = 0; i < order_per_axis; ++i) {
    for (int k = 0; k < order_per_axis; ++k) {
      const double x = stretch * rule.nodes[i];
      const double y = stretch * rule.nodes[k];
      const double r2 = x * x + y * y;
      const double log_ratio = log_norm - 0.5 * r2 / var_g + 0.5 * r2 / var_q;
      out.alpha.emplace_back(x, y);
      out.log_weight.push_back(std::log(rule.weights[i] * rule.weights[k] / std::numbers::pi) +
                               log_ratio);
    }
  }
  return out;
}

}  // namespace gaussfid::quadrature
