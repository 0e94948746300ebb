#include "gaussfid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "gaussfid/errors.hpp"
#include "gaussfid/quadrature.hpp"
#include "gaussfid/special.hpp"

namespace gaussfid::fidelity {

namespace {

using fock::GaussianFactor;

// Order of the comparison rule used for the Weyl-route error estimate.
constexpr int kRefinementStep = 8;
constexpr double kRefinementTarget = 1e-10;
constexpr int kMaxAdaptiveOrder = 160;

using ScaledWeyl = std::function<Complex(Complex)>;

// \int d^2alpha G |C|^2 with C = e^{-|alpha|^2/2} Ctilde; the Gaussian factor is
// folded into the log weights so outer nodes stay finite.
double weyl_overlap(const ScaledWeyl& scaled_weyl, ChannelNoise noise, int order, double scale) {
  const auto nodes = quadrature::gaussian_nodes(noise, order, scale);
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes.alpha.size(); ++j) {
    const Complex a = nodes.alpha[j];
    const double w = std::exp(nodes.log_weight[j] - std::norm(a));
    if (w == 0.0) continue;
    acc += w * std::norm(scaled_weyl(a));
  }
  return acc;
}

FidelityValue weyl_route(const ScaledWeyl& scaled_weyl, ChannelNoise noise, QuadratureSpec quad) {
  quad.validate();
  if (noise.gamma() == 0.0) {
    // G is a delta at the origin and C(0) = Tr(rho) = 1.
    return FidelityValue::make(std::norm(scaled_weyl(0.0)), Method::kWeylQuadrature, 0.0);
  }
  const double scale = quad.resolved_scale(noise);
  int order = quad.order_per_axis;
  double value = weyl_overlap(scaled_weyl, noise, order, scale);
  double check = weyl_overlap(scaled_weyl, noise, order + kRefinementStep, scale);
  // Wide channels (large gamma) need more nodes; climb until two successive
  // rules agree to kRefinementTarget or the order cap is hit.
  while (std::abs(value - check) > kRefinementTarget && order + 2 * kRefinementStep <= kMaxAdaptiveOrder) {
    order += kRefinementStep;
    value = check;
    check = weyl_overlap(scaled_weyl, noise, order + kRefinementStep, scale);
  }
  const double err = std::abs(value - check);
  if (err > kConvergenceLimit) {
    throw AccuracyError("Weyl-overlap quadrature not converged (" + std::to_string(err) +
                        "); raise the quadrature order");
  }
  return FidelityValue::make(value, Method::kWeylQuadrature, err);
}

ScaledWeyl scaled_weyl_of(const TruncatedPureState& psi) {
  const int s = psi.support();
  CVector v = psi.amplitudes().head(s);
  if (s > 1 && v.head(s - 1).squaredNorm() == 0.0) {
    // Number state: <n|D|n> = e^{-|alpha|^2/2} L_n(|alpha|^2).
    const double weight = std::norm(v[s - 1]);
    return [weight, n = s - 1](Complex a) { return Complex(weight * special::laguerre(n, 0, std::norm(a))); };
  }
  return [v = std::move(v), s](Complex a) {
    return v.dot(fock::displacement_block(a, s, s, GaussianFactor::kOmit) * v);
  };
}

ScaledWeyl scaled_weyl_of(const DensityMatrix& rho) {
  const int s = rho.support();
  CMatrix block = rho.matrix().topLeftCorner(s, s).transpose();
  return [block = std::move(block), s](Complex a) {
    return block.cwiseProduct(fock::displacement_block(a, s, s, GaussianFactor::kOmit)).sum();
  };
}

void require_two_mode_dim(int dim, const char* what) {
  if (dim > kMaxTwoModeDim) {
    throw DomainError(std::string(what) + ": per-mode dim " + std::to_string(dim) +
                      " exceeds the two-mode limit " + std::to_string(kMaxTwoModeDim));
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kWeylQuadrature: return "weyl_quadrature";
    case Method::kWignerOverlap: return "wigner_overlap";
    case Method::kDirectOverlap: return "direct_overlap";
    case Method::kAGamma: return "a_gamma";
    case Method::kClosedForm: return "closed_form";
    case Method::kMonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

FidelityValue FidelityValue::make(double raw, Method method, double error_estimate) {
  if (!std::isfinite(raw) || raw < -kValueSlack || raw > 1.0 + kValueSlack) {
    throw AccuracyError("fidelity " + std::to_string(raw) + " from " + std::string(to_string(method)) +
                        " lies outside [0, 1]");
  }
  return {std::clamp(raw, 0.0, 1.0), method, error_estimate, raw};
}

Ensemble::Ensemble(std::vector<Member> members, double tail) : members_(std::move(members)), tail_(tail) {
  if (members_.empty()) {
    throw DomainError("ensemble needs at least one member");
  }
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.probability >= 0.0 && m.probability <= 1.0)) {
      throw DomainError("ensemble probabilities must lie in [0, 1]");
    }
    if (m.state.dim() != members_.front().state.dim()) {
      throw DomainError("ensemble members must share one truncation dim");
    }
    total += m.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("ensemble probabilities sum to " + std::to_string(total));
  }
}

Ensemble Ensemble::bose_einstein(double nbar, int n_max, int dim) {
  const fock::ThermalSpec spec(nbar);
  if (n_max < 0 || n_max >= dim) {
    throw DomainError("Bose-Einstein cutoff must satisfy 0 <= n_max < dim");
  }
  const Eigen::VectorXd p = fock::bose_einstein_weights(spec.nbar(), n_max + 1);
  const double kept = p.sum();
  std::vector<Member> members;
  members.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    members.push_back({p[n] / kept, fock::number_state(n, dim)});
  }
  return Ensemble(std::move(members), std::pow(nbar / (1.0 + nbar), n_max + 1));
}

DensityMatrix Ensemble::density() const {
  const int dim = members_.front().state.dim();
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& m : members_) {
    rho += m.probability * m.state.amplitudes() * m.state.amplitudes().adjoint();
  }
  return DensityMatrix::from_matrix(std::move(rho), tail_);
}

FidelityValue fidelity_pure(const TruncatedPureState& psi, ChannelNoise noise, QuadratureSpec quad) {
  return weyl_route(scaled_weyl_of(psi), noise, quad);
}

FidelityValue fidelity_pure_direct(const TruncatedPureState& psi, ChannelNoise noise, QuadratureSpec quad) {
  const DensityMatrix out = channel::apply_channel(DensityMatrix::pure(psi), noise, quad);
  const CVector& v = psi.amplitudes();
  const double value = v.dot(out.matrix() * v).real();
  return FidelityValue::make(value, Method::kDirectOverlap, out.trace_deficit());
}

FidelityValue fidelity_wigner(const TruncatedPureState& psi, ChannelNoise noise, GridSpec grid) {
  const phasespace::PhaseGrid input = phasespace::wigner_grid(psi, grid);
  const phasespace::PhaseGrid output = phasespace::wigner_convolve(input, noise);
  const double value =
      std::numbers::pi * output.values.cwiseProduct(input.values).sum() * input.spec.cell_measure();
  const double err = std::abs(1.0 - input.mass()) + output.boundary_mass();
  return FidelityValue::make(value, Method::kWignerOverlap, err);
}

FidelityValue fidelity_pure_mc(const TruncatedPureState& psi, ChannelNoise noise, McSpec mc) {
  if (!(noise.gamma() > 0.0)) {
    throw DomainError("Monte-Carlo fidelity is degenerate at gamma = 0");
  }
  if (mc.samples < 2) {
    throw DomainError("Monte-Carlo fidelity needs at least two samples");
  }
  const auto weyl = scaled_weyl_of(psi);
  std::mt19937_64 rng(mc.seed);
  std::normal_distribution<double> axis(0.0, std::sqrt(0.25 * noise.gamma()));
  double sum = 0.0;
  double sq = 0.0;
  for (std::int64_t i = 0; i < mc.samples; ++i) {
    const Complex a(axis(rng), axis(rng));
    const double f = std::exp(-std::norm(a)) * std::norm(weyl(a));
    sum += f;
    sq += f * f;
  }
  const double n = static_cast<double>(mc.samples);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sq / n - mean * mean) / (n - 1.0));
  return FidelityValue::make(mean, Method::kMonteCarlo, se);
}

FidelityValue entanglement_fidelity(const DensityMatrix& rho, ChannelNoise noise, QuadratureSpec quad) {
  return weyl_route(scaled_weyl_of(rho), noise, quad);
}

FidelityValue entanglement_fidelity_via_purification(const DensityMatrix& rho, ChannelNoise noise,
                                                     QuadratureSpec quad) {
  const int dim = rho.dim();
  require_two_mode_dim(dim, "entanglement_fidelity_via_purification");
  // |psi> = sum_n sqrt(rho)|n> (x) |n>, stored as psi(m, n) = sqrt(rho)_{mn}.
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho = solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
  const CVector psi = sqrt_rho.reshaped();

  if (noise.gamma() == 0.0) {
    return FidelityValue::make(std::norm(psi.squaredNorm()), Method::kDirectOverlap, 0.0);
  }
  // Joint output state sum_j w_j (D_j (x) I)|psi><psi|(D_j (x) I)^dagger.
  const auto nodes = channel::kraus_weights(noise, quad);
  const Eigen::Index n2 = static_cast<Eigen::Index>(dim) * dim;
  CMatrix joint = CMatrix::Zero(n2, n2);
  CMatrix shifted(n2, 1);
  for (const auto& node : nodes) {
    shifted = (fock::displacement_matrix(node.alpha, dim) * sqrt_rho).reshaped(n2, 1);
    joint.selfadjointView<Eigen::Lower>().rankUpdate(shifted.col(0), node.weight);
  }
  const CMatrix full = joint.selfadjointView<Eigen::Lower>();
  const double value = psi.dot(full * psi).real();
  return FidelityValue::make(value, Method::kDirectOverlap, std::abs(1.0 - full.trace().real()));
}

FidelityValue ensemble_fidelity(const Ensemble& ensemble, ChannelNoise noise, QuadratureSpec quad) {
  double value = 0.0;
  double err = ensemble.tail();
  for (const auto& m : ensemble.members()) {
    // Number-state integrands are polynomials of degree 4(s-1) per axis;
    // 2s points make the rule exact for them.
    QuadratureSpec member_quad = quad;
    member_quad.order_per_axis = std::max(quad.order_per_axis, 2 * m.state.support());
    const FidelityValue f = fidelity_pure(m.state, noise, member_quad);
    value += m.probability * f.value;
    err += m.probability * f.error_estimate;
  }
  return FidelityValue::make(value, Method::kWeylQuadrature, err);
}

DensityMatrix difference_mode_state(const TruncatedPureState& psi) {
  const int s = psi.support();
  require_two_mode_dim(s, "difference_mode_state");
  const int out_dim = 2 * s - 1;
  const double theta = std::numbers::pi / 4.0;
  // x(k, l): amplitude on |k>_c |l>_d. The beamsplitter exp(theta (a^dagger b - a b^dagger))
  // conserves a^dagger a + b^dagger b, so each total-number block N is
  // exponentiated on its complete (N+1)-dim basis |i, N-i>.
  CMatrix x = CMatrix::Zero(out_dim, out_dim);
  for (int total = 0; total <= 2 * (s - 1); ++total) {
    const int size = total + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < total; ++i) {
      const double c = theta * std::sqrt(static_cast<double>(i + 1) * (total - i));
      gen(i + 1, i) = c;
      gen(i, i + 1) = -c;
    }
    CVector in = CVector::Zero(size);
    for (int i = std::max(0, total - s + 1); i <= std::min(total, s - 1); ++i) {
      in[i] = psi[i] * psi[total - i];
    }
    const Eigen::MatrixXd unitary = gen.exp();
    const CVector out = unitary.cast<Complex>() * in;
    for (int i = 0; i <= total; ++i) {
      // The block's second slot carries -d; restore the sign of d.
      const int l = total - i;
      x(i, l) = (l % 2 == 0) ? out[i] : -out[i];
    }
  }
  CMatrix rho_d = x.transpose() * x.conjugate();
  return DensityMatrix::from_matrix(std::move(rho_d));
}

FidelityValue fidelity_a_gamma(const TruncatedPureState& psi, ChannelNoise noise) {
  const DensityMatrix rho_d = difference_mode_state(psi);
  const double g = noise.gamma();
  const double prefactor = 1.0 / (1.0 + 0.5 * g);
  const double ratio = (1.0 - 0.5 * g) / (1.0 + 0.5 * g);
  // A_gamma = prefactor * ratio^{d^dagger d}, with 0^0 = 1 at gamma = 2.
  double value = 0.0;
  double power = 1.0;
  for (int l = 0; l < rho_d.dim(); ++l) {
    value += prefactor * power * rho_d(l, l).real();
    power *= ratio;
  }
  return FidelityValue::make(value, Method::kAGamma, std::abs(1.0 - rho_d.trace()));
}

double check_scaling_law(const TruncatedPureState& psi, ChannelNoise noise, QuadratureSpec quad) {
  const double g = noise.gamma();
  if (!(g > 0.0)) {
    throw DomainError("scaling law check needs gamma > 0");
  }
  const double lhs = fidelity_pure(psi, noise, quad).raw;
  const double rhs = (2.0 / g) * fidelity_pure(psi, ChannelNoise(4.0 / g), quad).raw;
  return std::abs(lhs - rhs);
}

bool check_max_bound(const FidelityValue& value, ChannelNoise noise) {
  return value.value <= 1.0 / (1.0 + 0.5 * noise.gamma()) + kValueSlack;
}

}  // namespace gaussfid::fidelity
