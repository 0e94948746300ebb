#include "gaussfid/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gaussfid/errors.hpp"
#include "gaussfid/special.hpp"

namespace gaussfid::fock {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-6;

void require_dim(int dim) {
  if (dim < 1) {
    throw DomainError("truncation dimension must be >= 1, got " + std::to_string(dim));
  }
}

void require_tail(double tail, double tail_tol, const char* what) {
  if (tail > tail_tol) {
    throw TruncationError(std::string(what) + ": truncation drops weight " + std::to_string(tail) +
                              " above tolerance " + std::to_string(tail_tol),
                          tail);
  }
}

}  // namespace

TruncatedPureState TruncatedPureState::from_amplitudes(CVector amps, double tail) {
  require_dim(static_cast<int>(amps.size()));
  const double norm = amps.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("state amplitudes must have finite nonzero norm");
  }
  amps /= norm;
  return TruncatedPureState(std::move(amps), tail);
}

double TruncatedPureState::mean_number() const {
  double acc = 0.0;
  for (int k = 1; k < dim(); ++k) {
    acc += k * std::norm(amps_[k]);
  }
  return acc;
}

int TruncatedPureState::support(double eps) const {
  for (int k = dim() - 1; k >= 0; --k) {
    if (std::abs(amps_[k]) > eps) {
      return k + 1;
    }
  }
  return 1;
}

DensityMatrix DensityMatrix::from_matrix(CMatrix mat, double trace_deficit) {
  if (mat.rows() != mat.cols()) {
    throw DomainError("density matrix must be square");
  }
  require_dim(static_cast<int>(mat.rows()));
  if (!mat.allFinite()) {
    throw DomainError("density matrix has non-finite entries");
  }
  const double skew = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermitianTol) {
    throw DomainError("density matrix is not Hermitian (max |M - M^dagger| = " +
                      std::to_string(skew) + ")");
  }
  CMatrix herm = (mat + mat.adjoint()) * 0.5;
  const double tr = herm.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw DomainError("density matrix trace " + std::to_string(tr) + " differs from 1");
  }
  DensityMatrix out(std::move(herm), trace_deficit);
  const double lo = out.min_eigenvalue();
  if (lo < -kPositivityTol) {
    throw DomainError("density matrix has negative eigenvalue " + std::to_string(lo));
  }
  return out;
}

DensityMatrix DensityMatrix::pure(const TruncatedPureState& psi) {
  const CVector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint(), psi.tail());
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

double DensityMatrix::mean_number() const {
  double acc = 0.0;
  for (int k = 1; k < dim(); ++k) {
    acc += k * mat_(k, k).real();
  }
  return acc;
}

Complex DensityMatrix::mean_annihilation() const {
  // Tr(a rho) = sum_n sqrt(n) rho_{n, n-1}
  Complex acc = 0.0;
  for (int n = 1; n < dim(); ++n) {
    acc += std::sqrt(static_cast<double>(n)) * mat_(n, n - 1);
  }
  return acc;
}

int DensityMatrix::support(double eps) const {
  for (int k = dim() - 1; k >= 0; --k) {
    if (std::abs(mat_(k, k).real()) > eps) {
      return k + 1;
    }
  }
  return 1;
}

SqueezeSpec SqueezeSpec::from_nbar(double nbar, double phase) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("squeezing mean quanta must be finite and >= 0");
  }
  const double modulus = std::sqrt(nbar / (1.0 + nbar));
  return SqueezeSpec(nbar, std::polar(modulus, phase));
}

SqueezeSpec SqueezeSpec::from_mu(Complex mu) {
  const double m2 = std::norm(mu);
  if (!(m2 < 1.0)) {
    throw DomainError("squeezing parameter must satisfy |mu| < 1");
  }
  return SqueezeSpec(m2 / (1.0 - m2), mu);
}

ThermalSpec::ThermalSpec(double nbar) : nbar_(nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("thermal mean quanta must be finite and >= 0");
  }
}

TruncatedPureState number_state(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) {
    throw std::out_of_range("number state |" + std::to_string(n) +
                            "> outside truncation dim " + std::to_string(dim));
  }
  CVector amps = CVector::Zero(dim);
  amps[n] = 1.0;
  return TruncatedPureState::from_amplitudes(std::move(amps));
}

TruncatedPureState coherent_state(Complex alpha, int dim, double tail_tol) {
  require_dim(dim);
  CVector amps = CVector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    amps[0] = 1.0;
    return TruncatedPureState::from_amplitudes(std::move(amps));
  }
  const double theta = std::arg(alpha);
  const auto lf = special::log_factorials(dim);
  const double log_r = std::log(r);
  double kept = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double mag = std::exp(-0.5 * r * r + k * log_r - 0.5 * lf[k]);
    amps[k] = std::polar(mag, k * theta);
    kept += mag * mag;
  }
  const double tail = std::max(0.0, 1.0 - kept);
  require_tail(tail, tail_tol, "coherent_state");
  return TruncatedPureState::from_amplitudes(std::move(amps), tail);
}

TruncatedPureState squeezed_state(const SqueezeSpec& spec, int dim, double tail_tol) {
  require_dim(dim);
  const Complex mu = spec.mu();
  const double m = std::abs(mu);
  CVector amps = CVector::Zero(dim);
  if (m == 0.0) {
    amps[0] = 1.0;
    return TruncatedPureState::from_amplitudes(std::move(amps));
  }
  const auto lf = special::log_factorials(dim);
  // amps[2k] = (1-|mu|^2)^{1/4} (-mu/2)^k sqrt((2k)!)/k!
  const double log_pref = 0.25 * std::log1p(-m * m);
  const double log_half_m = std::log(0.5 * m);
  const double phase = std::arg(-mu);
  double kept = 0.0;
  for (int k = 0; 2 * k < dim; ++k) {
    const double mag = std::exp(log_pref + k * log_half_m + 0.5 * lf[2 * k] - lf[k]);
    amps[2 * k] = std::polar(mag, k * phase);
    kept += mag * mag;
  }
  const double tail = std::max(0.0, 1.0 - kept);
  require_tail(tail, tail_tol, "squeezed_state");
  return TruncatedPureState::from_amplitudes(std::move(amps), tail);
}

TruncatedPureState superposition(std::span<const Complex> coefficients, int dim) {
  require_dim(dim);
  if (coefficients.size() > static_cast<std::size_t>(dim)) {
    throw DomainError("superposition has more coefficients than the truncation dim");
  }
  CVector amps = CVector::Zero(dim);
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    amps[static_cast<Eigen::Index>(k)] = coefficients[k];
  }
  return TruncatedPureState::from_amplitudes(std::move(amps));
}

TruncatedPureState superposition01(int dim) {
  const Complex c[] = {1.0, 1.0};
  return superposition(c, dim);
}

Eigen::VectorXd bose_einstein_weights(double nbar, int count) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(count);
  if (count == 0) {
    return p;
  }
  const double ratio = nbar / (1.0 + nbar);
  p[0] = 1.0 / (1.0 + nbar);
  for (int n = 1; n < count; ++n) {
    p[n] = p[n - 1] * ratio;
  }
  return p;
}

DensityMatrix thermal_state(const ThermalSpec& spec, int dim, double tail_tol) {
  require_dim(dim);
  const Eigen::VectorXd p = bose_einstein_weights(spec.nbar(), dim);
  const double tail = std::pow(spec.nbar() / (1.0 + spec.nbar()), dim);
  require_tail(tail, tail_tol, "thermal_state");
  CMatrix mat = CMatrix::Zero(dim, dim);
  const double kept = p.sum();
  for (int n = 0; n < dim; ++n) {
    mat(n, n) = p[n] / kept;
  }
  return DensityMatrix::from_matrix(std::move(mat), tail);
}

CMatrix displacement_block(Complex alpha, int rows, int cols, GaussianFactor factor) {
  if (rows < 1 || cols < 1) {
    throw DomainError("displacement block needs positive shape");
  }
  CMatrix d = CMatrix::Zero(rows, cols);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    // 0^0 = 1: only the diagonal survives.
    for (int k = 0; k < std::min(rows, cols); ++k) {
      d(k, k) = 1.0;
    }
    return d;
  }
  const long double x = static_cast<long double>(r) * r;
  const long double log_r = std::log(static_cast<long double>(r));
  const long double gauss = factor == GaussianFactor::kInclude ? -0.5L * x : 0.0L;
  const int top = std::max(rows, cols);
  const auto lf = special::log_factorials(top);
  const Complex unit = alpha / r;
  const Complex unit_up = -std::conj(unit);

  // Offset k = |m - n|, lower index j = min(m, n). For fixed k the prefactor
  // sqrt(j!/(j+k)!) r^k is advanced by sqrt((j+1)/(j+k+1)).
  for (int k = 0; k < top; ++k) {
    const int lower_len = std::min(rows - k, cols);  // entries (j+k, j)
    const int upper_len = k == 0 ? 0 : std::min(cols - k, rows);  // entries (j, j+k)
    const int len = std::max(lower_len, upper_len);
    if (len <= 0) {
      continue;
    }
    const auto lag = special::laguerre_sequence(len, k, x);
    const Complex phase_lo = std::pow(unit, k);
    const Complex phase_up = std::pow(unit_up, k);
    long double pref = std::exp(gauss + k * log_r - 0.5L * lf[k]);
    for (int j = 0; j < len; ++j) {
      const double value = static_cast<double>(pref * lag[j]);
      if (j < lower_len) {
        d(j + k, j) = value * phase_lo;
      }
      if (j < upper_len) {
        d(j, j + k) = value * phase_up;
      }
      pref *= std::sqrt(static_cast<long double>(j + 1) / static_cast<long double>(j + k + 1));
    }
  }
  return d;
}

CMatrix displacement_matrix(Complex alpha, int dim) { return displacement_block(alpha, dim, dim); }

CMatrix annihilation_matrix(int dim) {
  require_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

}  // namespace gaussfid::fock
