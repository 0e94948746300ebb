#pragma once

// Fidelity functionals of the Gaussian channel, each computed along its own
// numerical route so the routes can be checked against one another:
//   weyl_quadrature  \int d^2alpha G(alpha) |C(alpha)|^2
//   direct_overlap   <Psi|Phi(rho)|Psi> through the density-matrix channel
//   wigner_overlap   pi \int W_{Phi(rho)} W_Psi on a phase-space grid
//   a_gamma          Tr(A_gamma rho_D) after a 50:50 beamsplitter on two copies

#include <string_view>
#include <utility>
#include <vector>

#include "gaussfid/channel.hpp"
#include "gaussfid/fock.hpp"
#include "gaussfid/phasespace.hpp"

namespace gaussfid::fidelity {

using channel::McSpec;
using channel::QuadratureSpec;
using fock::DensityMatrix;
using fock::TruncatedPureState;
using phasespace::ChannelNoise;
using phasespace::GridSpec;

enum class Method { kWeylQuadrature, kWignerOverlap, kDirectOverlap, kAGamma, kClosedForm, kMonteCarlo };

std::string_view to_string(Method method);

inline constexpr double kValueSlack = 1e-9;

struct FidelityValue {
  double value = 0.0;
  Method method = Method::kWeylQuadrature;
  double error_estimate = 0.0;
  // Unclamped result of the route.
  double raw = 0.0;

  // Clamps noise in [-1e-9, 0) to 0 and (1, 1+1e-9] to 1; anything further
  // out is an AccuracyError.
  static FidelityValue make(double raw, Method method, double error_estimate);
};

class Ensemble {
 public:
  struct Member {
    double probability;
    TruncatedPureState state;
  };

  explicit Ensemble(std::vector<Member> members, double tail = 0.0);

  // Number states |0>..|n_max> with renormalised Bose-Einstein weights;
  // tail() is the dropped weight (nbar/(1+nbar))^(n_max+1).
  static Ensemble bose_einstein(double nbar, int n_max, int dim);

  const std::vector<Member>& members() const { return members_; }
  double tail() const { return tail_; }
  DensityMatrix density() const;

 private:
  std::vector<Member> members_;
  double tail_;
};

inline constexpr int kDefaultEnsembleCutoff = 40;
inline constexpr int kMaxTwoModeDim = 32;
inline constexpr double kConvergenceLimit = 1e-6;

FidelityValue fidelity_pure(const TruncatedPureState& psi, ChannelNoise noise, QuadratureSpec quad = {});
FidelityValue fidelity_pure_direct(const TruncatedPureState& psi, ChannelNoise noise,
                                   QuadratureSpec quad = {});
FidelityValue fidelity_wigner(const TruncatedPureState& psi, ChannelNoise noise, GridSpec grid = {});
FidelityValue fidelity_pure_mc(const TruncatedPureState& psi, ChannelNoise noise, McSpec mc);

FidelityValue entanglement_fidelity(const DensityMatrix& rho, ChannelNoise noise, QuadratureSpec quad = {});
FidelityValue entanglement_fidelity_via_purification(const DensityMatrix& rho, ChannelNoise noise,
                                                     QuadratureSpec quad = {});
FidelityValue ensemble_fidelity(const Ensemble& ensemble, ChannelNoise noise, QuadratureSpec quad = {});

/// Reduced state of d = (a - b)/sqrt(2) for the input |Psi>|Psi>.
DensityMatrix difference_mode_state(const TruncatedPureState& psi);
FidelityValue fidelity_a_gamma(const TruncatedPureState& psi, ChannelNoise noise);

/// |F(Psi, gamma) - (2/gamma) F(Psi, 4/gamma)| along the Weyl route.
double check_scaling_law(const TruncatedPureState& psi, ChannelNoise noise, QuadratureSpec quad = {});
/// value <= 1/(1 + gamma/2) + 1e-9
bool check_max_bound(const FidelityValue& value, ChannelNoise noise);

}  // namespace gaussfid::fidelity
