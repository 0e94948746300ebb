#include "gaussfid/phasespace.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gaussfid/errors.hpp"
#include "gaussfid/format.hpp"

namespace gaussfid::phasespace {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

// Tr[rho_top M] over the leading s x s block; rho_{nm} M_{mn}.
Complex trace_product(const CMatrix& rho, const CMatrix& m) {
  const Eigen::Index s = m.rows();
  return (rho.topLeftCorner(s, s).transpose().cwiseProduct(m)).sum();
}

void apply_parity_columns(CMatrix& m) {
  for (Eigen::Index n = 1; n < m.cols(); n += 2) {
    m.col(n) *= -1.0;
  }
}

template <typename Eval>
PhaseGrid sample_grid(GridSpec spec, Eval&& eval) {
  spec.validate();
  PhaseGrid grid{spec, Eigen::MatrixXd(spec.points, spec.points)};
  for (int ip = 0; ip < spec.points; ++ip) {
    for (int iq = 0; iq < spec.points; ++iq) {
      grid.values(ip, iq) = eval(PhasePoint::from_quadratures(spec.coordinate(iq), spec.coordinate(ip)));
    }
  }
  return grid;
}

void assess_coverage(PhaseGrid& grid, double mean_number, double grid_tol) {
  // <q^2 + p^2> = 2<n> + 1 must fit well inside the lattice.
  const double rms = std::sqrt(2.0 * mean_number + 1.0);
  grid.coverage_ok = grid.spec.half_width > rms && std::abs(grid.mass() - 1.0) <= grid_tol &&
                     grid.boundary_mass() <= grid_tol;
}

void fft2(Eigen::FFT<double>& fft, Eigen::MatrixXcd& m, bool inverse) {
  std::vector<Complex> in(static_cast<std::size_t>(m.rows()));
  std::vector<Complex> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) in[r] = m(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = out[r];
  }
  in.resize(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) in[c] = m(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = out[c];
  }
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

ChannelNoise::ChannelNoise(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("channel noise gamma must be finite and >= 0, got " + std::to_string(gamma));
  }
}

PhasePoint PhasePoint::from_quadratures(double q, double p) { return {Complex(q, p) / sqrt2}; }
double PhasePoint::q() const { return sqrt2 * alpha.real(); }
double PhasePoint::p() const { return sqrt2 * alpha.imag(); }

void GridSpec::validate() const {
  if (!(half_width > 0.0) || points < 2) {
    throw DomainError("phase grid needs half_width > 0 and at least 2 points per axis");
  }
}

double PhaseGrid::mass() const { return values.sum() * spec.cell_measure(); }

double PhaseGrid::boundary_mass() const {
  const Eigen::Index n = values.rows();
  double acc = values.row(0).cwiseAbs().sum() + values.row(n - 1).cwiseAbs().sum();
  if (n > 2) {
    acc += values.col(0).segment(1, n - 2).cwiseAbs().sum();
    acc += values.col(n - 1).segment(1, n - 2).cwiseAbs().sum();
  }
  return acc * spec.cell_measure();
}

Complex weyl_function(const DensityMatrix& rho, PhasePoint point) {
  const int s = rho.support();
  return trace_product(rho.matrix(), fock::displacement_block(point.alpha, s, s));
}

Complex weyl_function(const TruncatedPureState& psi, PhasePoint point) {
  const int s = psi.support();
  const auto v = psi.amplitudes().head(s);
  return v.dot(fock::displacement_block(point.alpha, s, s) * v);
}

double wigner_function(const DensityMatrix& rho, PhasePoint point) {
  const int s = rho.support();
  CMatrix dp = fock::displacement_block(2.0 * point.alpha, s, s);
  apply_parity_columns(dp);
  return (2.0 / pi) * trace_product(rho.matrix(), dp).real();
}

double wigner_function(const TruncatedPureState& psi, PhasePoint point) {
  const int s = psi.support();
  CMatrix dp = fock::displacement_block(2.0 * point.alpha, s, s);
  apply_parity_columns(dp);
  const auto v = psi.amplitudes().head(s);
  return (2.0 / pi) * v.dot(dp * v).real();
}

PhaseGrid wigner_grid(const DensityMatrix& rho, GridSpec spec, double grid_tol) {
  PhaseGrid grid = sample_grid(spec, [&](PhasePoint pt) { return wigner_function(rho, pt); });
  assess_coverage(grid, rho.mean_number(), grid_tol);
  return grid;
}

PhaseGrid wigner_grid(const TruncatedPureState& psi, GridSpec spec, double grid_tol) {
  PhaseGrid grid = sample_grid(spec, [&](PhasePoint pt) { return wigner_function(psi, pt); });
  assess_coverage(grid, psi.mean_number(), grid_tol);
  return grid;
}

WeylGrid weyl_grid(const DensityMatrix& rho, GridSpec spec) {
  spec.validate();
  WeylGrid grid{spec, Eigen::MatrixXcd(spec.points, spec.points)};
  for (int ip = 0; ip < spec.points; ++ip) {
    for (int iq = 0; iq < spec.points; ++iq) {
      grid.values(ip, iq) =
          weyl_function(rho, PhasePoint::from_quadratures(spec.coordinate(iq), spec.coordinate(ip)));
    }
  }
  return grid;
}

PhaseGrid wigner_from_weyl(const WeylGrid& weyl, GridSpec target) {
  target.validate();
  const int nb = weyl.spec.points;
  const int na = target.points;
  // Re/Im of alpha and beta in alpha units.
  Eigen::VectorXd a(na), b(nb);
  for (int i = 0; i < na; ++i) a[i] = target.coordinate(i) / sqrt2;
  for (int i = 0; i < nb; ++i) b[i] = weyl.spec.coordinate(i) / sqrt2;

  // alpha beta* - alpha* beta = 2i (a2 b1 - a1 b2)
  Eigen::MatrixXcd left(na, nb), right(nb, na);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      left(i, j) = std::polar(1.0, 2.0 * a[i] * b[j]);
      right(j, i) = std::polar(1.0, -2.0 * a[i] * b[j]);
    }
  }
  // weyl.values(ib2, ib1) -> W(ia2, ia1) = sum left(ia2, ib1) C^T(ib1, ib2) right(ib2, ia1)
  const Eigen::MatrixXcd w = left * weyl.values.transpose() * right;
  PhaseGrid out{target, (w.real() * (weyl.spec.cell_measure() / (pi * pi))).eval()};
  out.coverage_ok = true;
  return out;
}

WeylFunction weyl_damp(WeylFunction weyl, ChannelNoise noise) {
  const double gamma = noise.gamma();
  return [weyl = std::move(weyl), gamma](PhasePoint pt) {
    return std::exp(-0.5 * gamma * std::norm(pt.alpha)) * weyl(pt);
  };
}

PhaseGrid wigner_convolve(const PhaseGrid& grid, ChannelNoise noise, double grid_tol) {
  if (noise.gamma() == 0.0) {
    return grid;
  }
  const int m = grid.spec.points;
  const double h = grid.spec.spacing();
  // Kernel standard deviation per quadrature axis.
  const double sigma = std::sqrt(noise.variance());
  const int pad = static_cast<int>(std::ceil(6.0 * sigma / h)) + 1;
  const int len = next_pow2(m + 2 * pad);
  const int offset = (len - m) / 2;

  Eigen::MatrixXcd work = Eigen::MatrixXcd::Zero(len, len);
  work.block(offset, offset, m, m) = grid.values.cast<Complex>();

  Eigen::FFT<double> fft;
  fft2(fft, work, false);
  Eigen::VectorXd transfer(len);
  for (int j = 0; j < len; ++j) {
    const int f = j <= len / 2 ? j : j - len;
    const double k = 2.0 * pi * f / (len * h);
    transfer[j] = std::exp(-0.5 * sigma * sigma * k * k);
  }
  for (int c = 0; c < len; ++c) {
    for (int r = 0; r < len; ++r) {
      work(r, c) *= transfer[r] * transfer[c];
    }
  }
  fft2(fft, work, true);

  PhaseGrid out{grid.spec, work.block(offset, offset, m, m).real()};
  out.coverage_ok = grid.coverage_ok && out.boundary_mass() <= grid_tol;
  return out;
}

void write_csv(std::ostream& out, const PhaseGrid& grid) {
  out << "q,p,value\n";
  for (int ip = 0; ip < grid.spec.points; ++ip) {
    for (int iq = 0; iq < grid.spec.points; ++iq) {
      out << format_number(grid.spec.coordinate(iq)) << ',' << format_number(grid.spec.coordinate(ip))
          << ',' << format_number(grid.values(ip, iq)) << '\n';
    }
  }
}

}  // namespace gaussfid::phasespace
