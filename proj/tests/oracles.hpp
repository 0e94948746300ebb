#pragma once

// Reference implementations used only by the tests. None of them calls into
// the library's special functions, displacement elements or quadrature.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double b = 1.0L;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// L_n^{(k)}(x) = sum_j (-1)^j C(n+k, n-j) x^j / j!
inline double laguerre(int n, int k, double x) {
  long double sum = 0.0L;
  long double term = 1.0L;  // x^j / j!
  for (int j = 0; j <= n; ++j) {
    if (j > 0) term *= static_cast<long double>(x) / j;
    sum += ((j % 2) ? -1.0L : 1.0L) * binomial(n + k, n - j) * term;
  }
  return static_cast<double>(sum);
}

// sum_j C(n+k, n-j) x^j / j!: the scale of the cancellation in laguerre().
inline double laguerre_abs_sum(int n, int k, double x) {
  long double sum = 0.0L;
  long double term = 1.0L;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) term *= static_cast<long double>(x) / j;
    sum += binomial(n + k, n - j) * term;
  }
  return static_cast<double>(sum);
}

// P_n(x) = sum_k C(n,k)^2 ((x-1)/2)^(n-k) ((x+1)/2)^k
inline double legendre(int n, double x) {
  long double sum = 0.0L;
  for (int k = 0; k <= n; ++k) {
    const long double b = binomial(n, k);
    sum += b * b * std::pow((static_cast<long double>(x) - 1) / 2, n - k) *
           std::pow((static_cast<long double>(x) + 1) / 2, k);
  }
  return static_cast<double>(sum);
}

inline CMatrix annihilation(int dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// exp(c * a) for the nilpotent truncated lowering operator: a finite sum.
inline CMatrix exp_lowering(Complex c, int dim) {
  const CMatrix a = annihilation(dim);
  CMatrix term = CMatrix::Identity(dim, dim);
  CMatrix sum = term;
  for (int k = 1; k < dim; ++k) {
    term = term * a * c / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// D(alpha) = e^{-|alpha|^2/2} e^{alpha a^dagger} e^{-alpha^* a}. In normal
// order every element <m|.|n> only involves |k> with k <= min(m, n), so the
// truncated product is exact.
inline CMatrix displacement(Complex alpha, int dim) {
  const CMatrix up = exp_lowering(std::conj(alpha), dim).adjoint();
  const CMatrix down = exp_lowering(-std::conj(alpha), dim);
  return std::exp(-0.5 * std::norm(alpha)) * up * down;
}

// exp(c a) psi, applying the lowering operator to the vector term by term.
inline CVector exp_lowering_apply(Complex c, const CVector& psi) {
  const int dim = static_cast<int>(psi.size());
  CVector term = psi;
  CVector sum = psi;
  for (int k = 1; k < dim; ++k) {
    CVector next = CVector::Zero(dim);
    for (int n = 1; n < dim; ++n) next[n - 1] = std::sqrt(static_cast<double>(n)) * term[n];
    term = next * c / static_cast<double>(k);
    // Stop before the terms turn denormal.
    if (term.squaredNorm() < 1e-250) break;
    sum += term;
  }
  return sum;
}

// Tr[rho D(alpha)] for a pure state, from the normal-ordered form
// <e^{alpha^* a} psi | e^{-alpha^* a} psi> e^{-|alpha|^2/2}.
inline Complex weyl(const CVector& psi, Complex alpha) {
  const CVector left = exp_lowering_apply(std::conj(alpha), psi);
  const CVector right = exp_lowering_apply(-std::conj(alpha), psi);
  return std::exp(-0.5 * std::norm(alpha)) * left.dot(right);
}

// Gaussian channel kernel G(alpha) = (2/(pi gamma)) exp(-2|alpha|^2/gamma).
inline double kernel(double gamma, Complex alpha) {
  return 2.0 / (std::numbers::pi * gamma) * std::exp(-2.0 * std::norm(alpha) / gamma);
}

// Trapezoid sum of G |C|^2 over a square in the alpha plane. The integrand is
// Gaussian-decaying and analytic, so the rule converges spectrally.
inline double fidelity_brute(const CVector& psi, double gamma, double half_width, int points) {
  const double h = 2.0 * half_width / (points - 1);
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const Complex a(-half_width + i * h, -half_width + j * h);
      acc += kernel(gamma, a) * std::norm(weyl(psi, a));
    }
  }
  return acc * h * h;
}

// (2/gamma) int_0^inf e^{-(2/gamma + 1) t} L_n(t)^2 dt by composite Simpson:
// the radial form of the number-state Weyl overlap.
inline double number_fidelity_radial(int n, double gamma) {
  const double rate = 2.0 / gamma + 1.0;
  const double upper = (80.0 + 8.0 * n) / rate;
  const int intervals = 40000;
  const double h = upper / intervals;
  auto f = [&](double t) {
    const double l = laguerre(n, 0, t);
    return std::exp(-rate * t) * l * l;
  };
  double acc = f(0.0) + f(upper);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 2.0 / gamma * acc * h / 3.0;
}

// W_n(alpha) = (2/pi) (-1)^n e^{-2|alpha|^2} L_n(4|alpha|^2)
inline double number_wigner(int n, Complex alpha) {
  const double r2 = std::norm(alpha);
  return 2.0 / std::numbers::pi * ((n % 2) ? -1.0 : 1.0) * std::exp(-2.0 * r2) * laguerre(n, 0, 4.0 * r2);
}

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch: nodes are eigenvalues of the Hermite Jacobi matrix,
// weights sqrt(pi) times the squared first eigenvector components.
inline Rule gauss_hermite(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(solver.eigenvalues()[i]);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return rule;
}

// Phi(rho) by a trapezoid sum over alpha with the exact normal-ordered
// displacement, working at dim + pad and cropping.
inline CMatrix channel_brute(const CMatrix& rho, double gamma, int pad, double half_width, int points) {
  const int dim = static_cast<int>(rho.rows());
  const int big = dim + pad;
  CMatrix padded = CMatrix::Zero(big, big);
  padded.topLeftCorner(dim, dim) = rho;
  const double h = 2.0 * half_width / (points - 1);
  CMatrix acc = CMatrix::Zero(big, big);
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const Complex a(-half_width + i * h, -half_width + j * h);
      const double w = kernel(gamma, a) * h * h;
      if (w < 1e-18) continue;
      const CMatrix d = displacement(a, big);
      acc += w * d * padded * d.adjoint();
    }
  }
  return acc.topLeftCorner(dim, dim);
}

}  // namespace oracle
