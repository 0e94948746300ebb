#pragma once

// Weyl characteristic and Wigner functions of truncated states, and the
// channel's two phase-space forms: Gaussian damping of the Weyl function and
// Gaussian convolution of the Wigner function.
//
// Phase-space points are alpha = (q + i p)/sqrt(2). Grids are laid out on a
// symmetric (q, p) lattice; values(ip, iq) holds the sample at (q_iq, p_ip).

#include <functional>
#include <iosfwd>

#include "gaussfid/fock.hpp"

namespace gaussfid::phasespace {

using fock::DensityMatrix;
using fock::TruncatedPureState;

class ChannelNoise {
 public:
  explicit ChannelNoise(double gamma);

  double gamma() const { return gamma_; }
  /// Phase-space variance sigma^2 = gamma/2.
  double variance() const { return 0.5 * gamma_; }

 private:
  double gamma_;
};

struct PhasePoint {
  Complex alpha;

  static PhasePoint from_quadratures(double q, double p);
  double q() const;
  double p() const;
};

inline constexpr double kDefaultGridHalfWidth = 6.0;
inline constexpr int kDefaultGridPoints = 128;
inline constexpr double kDefaultGridTol = 1e-6;

struct GridSpec {
  double half_width = kDefaultGridHalfWidth;
  int points = kDefaultGridPoints;

  void validate() const;
  double spacing() const { return 2.0 * half_width / (points - 1); }
  double coordinate(int i) const { return -half_width + i * spacing(); }
  /// d^2 alpha of one lattice cell (dq dp / 2).
  double cell_measure() const { return 0.5 * spacing() * spacing(); }
};

struct PhaseGrid {
  GridSpec spec;
  Eigen::MatrixXd values;
  // False when the state's mass is not resolved inside the lattice.
  bool coverage_ok = true;

  /// Riemann sum of values over d^2 alpha.
  double mass() const;
  /// Riemann sum of |values| over the outermost ring of cells.
  double boundary_mass() const;
};

struct WeylGrid {
  GridSpec spec;
  Eigen::MatrixXcd values;
};

/// C_rho(alpha) = Tr[rho D(alpha)]
Complex weyl_function(const DensityMatrix& rho, PhasePoint point);
Complex weyl_function(const TruncatedPureState& psi, PhasePoint point);

/// W(alpha) = (2/pi) Tr[rho D(alpha) (-1)^{a^dagger a} D^dagger(alpha)], using D(alpha) P D^dagger(alpha) = D(2 alpha) P.
double wigner_function(const DensityMatrix& rho, PhasePoint point);
double wigner_function(const TruncatedPureState& psi, PhasePoint point);

PhaseGrid wigner_grid(const DensityMatrix& rho, GridSpec spec = {}, double grid_tol = kDefaultGridTol);
PhaseGrid wigner_grid(const TruncatedPureState& psi, GridSpec spec = {},
                      double grid_tol = kDefaultGridTol);

WeylGrid weyl_grid(const DensityMatrix& rho, GridSpec spec);

// W(alpha) = (1/pi^2) \int d^2 beta exp(alpha beta* - alpha* beta) C(beta),
// evaluated as a separable direct DFT of the sampled Weyl grid onto `target`.
PhaseGrid wigner_from_weyl(const WeylGrid& weyl, GridSpec target);

using WeylFunction = std::function<Complex(PhasePoint)>;

/// C_{Phi(rho)}(alpha) = e^{-gamma |alpha|^2 / 2} C_rho(alpha)
WeylFunction weyl_damp(WeylFunction weyl, ChannelNoise noise);

// W_{Phi(rho)} = G * W_rho with G(alpha) = (2/(pi gamma)) e^{-2|alpha|^2/gamma}.
// Zero-padded FFT with the analytic Gaussian transfer function; gamma = 0
// returns the input.
PhaseGrid wigner_convolve(const PhaseGrid& grid, ChannelNoise noise,
                          double grid_tol = kDefaultGridTol);

/// CSV with header "q,p,value", rows ordered by p then q.
void write_csv(std::ostream& out, const PhaseGrid& grid);

}  // namespace gaussfid::phasespace
