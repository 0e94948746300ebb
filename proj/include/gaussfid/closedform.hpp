#pragma once

// Analytic channel fidelities used as oracles for the numeric routes.

#include "gaussfid/phasespace.hpp"

namespace gaussfid::closedform {

using phasespace::ChannelNoise;

// Second moments of a two-mode Gaussian teleportation resource:
// <|alpha|^2> = <|beta|^2> = n + 1/2 and <alpha beta> = m.
class ResourceMoments {
 public:
  // Requires n >= 0 and |m| <= sqrt(n(n+1)), the latter with a rounding
  // slack of 1e-12 (1 + n).
  ResourceMoments(double n, double m);

  double n() const { return n_; }
  double m() const { return m_; }
  /// n >= |m|
  bool separable() const;

 private:
  double n_;
  double m_;
};

/// 1/(1 + gamma/2), attained by coherent states.
double max_fidelity(ChannelNoise noise);

// F(|n>, gamma) = (1-g/2)^n / (1+g/2)^{n+1} P_n((1+g^2/4)/(1-g^2/4)).
// gamma = 2 uses (2n)!/(2^{2n+1} (n!)^2); within 1e-6 of 2 the homogeneous
// recurrence below is used instead of the singular Legendre argument.
double fidelity_number(int n, ChannelNoise noise);

/// The Legendre expression as written; undefined at gamma = 2.
double fidelity_number_legendre(int n, ChannelNoise noise);
/// (2n)! / (2^{2n+1} (n!)^2)
double fidelity_number_gamma2(int n);
// Q_n / (1+g/2)^{2n+1} with Q_0 = 1, Q_1 = 1 + g^2/4,
// (k+1) Q_{k+1} = (2k+1)(1+g^2/4) Q_k - k (1-g^2/4)^2 Q_{k-1}. Regular at every gamma.
double fidelity_number_homogeneous(int n, ChannelNoise noise);

/// sum_n lambda^n F(|n>, gamma) = 1/sqrt([(1-l)+(1+l)g/2]^2 - l g^2), |lambda| < 1.
double generating_function(ChannelNoise noise, double lambda);

/// (|0> + |1>)/sqrt(2): (1 + 3g/4 + g^2/4)/(1 + g/2)^3
double fidelity_superposition01(ChannelNoise noise);

/// 1/sqrt(1 + (2 nbar + 1) g + g^2/4)
double fidelity_squeezed(double nbar, ChannelNoise noise);

/// Bose-Einstein ensemble of number states; equal to fidelity_squeezed.
double thermal_ensemble_fidelity(double nbar, ChannelNoise noise);

/// 1/(1 + (2 nbar + 1) g/2)
double thermal_entanglement_fidelity(double nbar, ChannelNoise noise);

// Amplifier (amplitude gain sqrt 2) followed by a 50:50 beamsplitter: each
// clone sees the input through a Gaussian channel with gamma = 1, so
// F_clone(Psi) = F(Psi, 1) = 2 F(Psi, 4) <= 2/3.
ChannelNoise cloning_gamma();

/// gamma = 2 [1 + 2 (n + m)]
ChannelNoise teleport_gamma(const ResourceMoments& resource);

}  // namespace gaussfid::closedform
