#include "gaussfid/closedform.hpp"

#include <cmath>
#include <string>

#include "gaussfid/errors.hpp"
#include "gaussfid/special.hpp"

namespace gaussfid::closedform {

namespace {

constexpr double kLimitBranchWidth = 1e-6;

void require_order(int n) {
  if (n < 0) {
    throw DomainError("number-state index must be >= 0");
  }
}

void require_nbar(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("mean quanta must be finite and >= 0");
  }
}

}  // namespace

ResourceMoments::ResourceMoments(double n, double m) : n_(n), m_(m) {
  if (!(n >= 0.0) || !std::isfinite(n) || !std::isfinite(m)) {
    throw DomainError("resource moments need finite n >= 0");
  }
  if (std::abs(m) > std::sqrt(n * (n + 1.0)) + 1e-12 * (1.0 + n)) {
    throw DomainError("resource moments violate |m| <= sqrt(n(n+1)): n=" + std::to_string(n) +
                      " m=" + std::to_string(m));
  }
}

bool ResourceMoments::separable() const { return n_ >= std::abs(m_); }

double max_fidelity(ChannelNoise noise) { return 1.0 / (1.0 + 0.5 * noise.gamma()); }

double fidelity_number_legendre(int n, ChannelNoise noise) {
  require_order(n);
  const double g = noise.gamma();
  const double x = (1.0 + 0.25 * g * g) / (1.0 - 0.25 * g * g);
  return std::pow(1.0 - 0.5 * g, n) / std::pow(1.0 + 0.5 * g, n + 1) * special::legendre(n, x);
}

double fidelity_number_gamma2(int n) {
  require_order(n);
  // (2n)!/(2^{2n} (n!)^2) = prod_{k=1}^{n} (2k-1)/(2k)
  double central = 1.0;
  for (int k = 1; k <= n; ++k) {
    central *= (2.0 * k - 1.0) / (2.0 * k);
  }
  return 0.5 * central;
}

double fidelity_number_homogeneous(int n, ChannelNoise noise) {
  require_order(n);
  const double g = noise.gamma();
  const double num = 1.0 + 0.25 * g * g;
  const double den = 1.0 - 0.25 * g * g;
  const double v2 = (1.0 + 0.5 * g) * (1.0 + 0.5 * g);
  // Track Q_k / v^{2k} to stay in range: q_k = Q_k / (1+g/2)^{2k}.
  double prev = 1.0;
  if (n == 0) return 1.0 / (1.0 + 0.5 * g);
  double cur = num / v2;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * num * cur / v2 - k * den * den * prev / (v2 * v2)) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur / (1.0 + 0.5 * g);
}

double fidelity_number(int n, ChannelNoise noise) {
  require_order(n);
  const double g = noise.gamma();
  if (g == 2.0) {
    return fidelity_number_gamma2(n);
  }
  if (std::abs(g - 2.0) < kLimitBranchWidth) {
    return fidelity_number_homogeneous(n, noise);
  }
  return fidelity_number_legendre(n, noise);
}

double generating_function(ChannelNoise noise, double lambda) {
  if (!(std::abs(lambda) < 1.0)) {
    throw DomainError("generating function needs |lambda| < 1");
  }
  const double g = noise.gamma();
  const double lin = (1.0 - lambda) + (1.0 + lambda) * 0.5 * g;
  const double radicand = lin * lin - lambda * g * g;
  if (!(radicand > 0.0)) {
    throw DomainError("generating function radicand is not positive");
  }
  return 1.0 / std::sqrt(radicand);
}

double fidelity_superposition01(ChannelNoise noise) {
  const double g = noise.gamma();
  return (1.0 + 0.75 * g + 0.25 * g * g) / std::pow(1.0 + 0.5 * g, 3);
}

double fidelity_squeezed(double nbar, ChannelNoise noise) {
  require_nbar(nbar);
  const double g = noise.gamma();
  return 1.0 / std::sqrt(1.0 + (2.0 * nbar + 1.0) * g + 0.25 * g * g);
}

double thermal_ensemble_fidelity(double nbar, ChannelNoise noise) { return fidelity_squeezed(nbar, noise); }

double thermal_entanglement_fidelity(double nbar, ChannelNoise noise) {
  require_nbar(nbar);
  return 1.0 / (1.0 + (2.0 * nbar + 1.0) * 0.5 * noise.gamma());
}

ChannelNoise cloning_gamma() { return ChannelNoise(1.0); }

ChannelNoise teleport_gamma(const ResourceMoments& resource) {
  return ChannelNoise(2.0 * (1.0 + 2.0 * (resource.n() + resource.m())));
}

}  // namespace gaussfid::closedform
