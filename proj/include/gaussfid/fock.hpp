#pragma once

// Truncated Fock-space states and single-mode operators.
//
// Basis vectors |0>..|dim-1>. Constructors of states with infinite support
// (coherent, squeezed, thermal) renormalise after truncation and keep the
// probability that fell off the end, so callers can judge the truncation.

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace gaussfid {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

}  // namespace gaussfid

namespace gaussfid::fock {

inline constexpr int kDefaultDim = 64;
inline constexpr int kDefaultTwoModeDim = 24;
inline constexpr double kDefaultTailTol = 1e-8;
inline constexpr double kPositivityTol = 1e-9;

class TruncatedPureState {
 public:
  // Normalises `amps`; `tail` is the weight lost to truncation before that.
  static TruncatedPureState from_amplitudes(CVector amps, double tail = 0.0);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](int k) const { return amps_[k]; }
  double tail() const { return tail_; }

  /// <a^dagger a>
  double mean_number() const;

  /// One past the last amplitude with modulus above `eps`.
  int support(double eps = 1e-17) const;

 private:
  TruncatedPureState(CVector amps, double tail) : amps_(std::move(amps)), tail_(tail) {}

  CVector amps_;
  double tail_ = 0.0;
};

class DensityMatrix {
 public:
  // Checks Hermiticity, unit trace (1e-6) and positivity (kPositivityTol);
  // the stored matrix is the exact Hermitian part of `mat`.
  static DensityMatrix from_matrix(CMatrix mat, double trace_deficit = 0.0);
  static DensityMatrix pure(const TruncatedPureState& psi);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }
  double trace() const { return mat_.trace().real(); }
  double trace_deficit() const { return trace_deficit_; }
  double min_eigenvalue() const;
  double purity() const;
  double mean_number() const;
  Complex mean_annihilation() const;

  /// One past the last diagonal entry above `eps`; rows/cols beyond are zero for PSD input.
  int support(double eps = 1e-300) const;

 private:
  DensityMatrix(CMatrix mat, double deficit) : mat_(std::move(mat)), trace_deficit_(deficit) {}

  CMatrix mat_;
  double trace_deficit_ = 0.0;
};

class SqueezeSpec {
 public:
  static SqueezeSpec from_nbar(double nbar, double phase = 0.0);
  static SqueezeSpec from_mu(Complex mu);

  double nbar() const { return nbar_; }
  Complex mu() const { return mu_; }

 private:
  SqueezeSpec(double nbar, Complex mu) : nbar_(nbar), mu_(mu) {}
  double nbar_;
  Complex mu_;
};

class ThermalSpec {
 public:
  explicit ThermalSpec(double nbar);
  double nbar() const { return nbar_; }

 private:
  double nbar_;
};

TruncatedPureState number_state(int n, int dim);
TruncatedPureState coherent_state(Complex alpha, int dim, double tail_tol = kDefaultTailTol);
TruncatedPureState squeezed_state(const SqueezeSpec& spec, int dim,
                                  double tail_tol = kDefaultTailTol);
/// Normalised sum_k c_k |k> embedded in `dim`.
TruncatedPureState superposition(std::span<const Complex> coefficients, int dim);
/// (|0> + |1>)/sqrt(2)
TruncatedPureState superposition01(int dim);

DensityMatrix thermal_state(const ThermalSpec& spec, int dim, double tail_tol = kDefaultTailTol);

/// Bose-Einstein weights p_n = nbar^n / (1+nbar)^(n+1), n < count, unnormalised.
Eigen::VectorXd bose_einstein_weights(double nbar, int count);

enum class GaussianFactor { kInclude, kOmit };

// <m|D(alpha)|n> for m < rows, n < cols. Closed form
//   m >= n: sqrt(n!/m!) alpha^(m-n) e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)
//   m <  n: sqrt(m!/n!) (-alpha*)^(n-m) e^{-|alpha|^2/2} L_m^{(n-m)}(|alpha|^2)
// With GaussianFactor::kOmit the common e^{-|alpha|^2/2} is dropped, which
// keeps large-|alpha| quadrature nodes finite when the caller reapplies it
// in log space.
CMatrix displacement_block(Complex alpha, int rows, int cols,
                           GaussianFactor factor = GaussianFactor::kInclude);
CMatrix displacement_matrix(Complex alpha, int dim);

CMatrix annihilation_matrix(int dim);

}  // namespace gaussfid::fock
