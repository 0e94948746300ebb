#include "gaussfid/channel.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gaussfid/errors.hpp"
#include "gaussfid/quadrature.hpp"

namespace gaussfid::channel {

namespace {

// rho = V diag(lambda) V^dagger restricted to its support, small eigenvalues dropped.
struct SpectralFactor {
  CMatrix vectors;          // support x rank
  Eigen::VectorXd values;   // rank
};

SpectralFactor factorize(const DensityMatrix& rho) {
  const int s = rho.support();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix().topLeftCorner(s, s));
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double cutoff = 1e-15 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > cutoff) keep.push_back(i);
  }
  SpectralFactor f{CMatrix(s, static_cast<Eigen::Index>(keep.size())),
                   Eigen::VectorXd(static_cast<Eigen::Index>(keep.size()))};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    f.vectors.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(keep[i]);
    f.values[static_cast<Eigen::Index>(i)] = ev[keep[i]];
  }
  return f;
}

// Accumulates w D V diag(lambda) V^dagger D^dagger into out.
void add_conjugated(CMatrix& out, double w, const CMatrix& d, const SpectralFactor& f) {
  const CMatrix dv = d * f.vectors;
  out.noalias() += dv * (w * f.values).asDiagonal() * dv.adjoint();
}

DensityMatrix finish(CMatrix out, const DensityMatrix& rho) {
  out = (out + out.adjoint()).eval() * 0.5;
  const double drift = std::abs(out.trace().real() - rho.trace());
  if (drift > kTraceDriftLimit) {
    throw AccuracyError("channel output lost trace " + std::to_string(drift) +
                        " to truncation; raise the truncation dim");
  }
  return DensityMatrix::from_matrix(std::move(out), rho.trace_deficit() + drift);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (order_per_axis < 1) {
    throw DomainError("quadrature order per axis must be >= 1");
  }
  if (scale < 0.0 || !std::isfinite(scale)) {
    throw DomainError("quadrature scale must be >= 0 (0 = automatic)");
  }
}

double QuadratureSpec::resolved_scale(ChannelNoise noise) const {
  if (scale > 0.0) return scale;
  return std::sqrt(0.25 * noise.gamma() / (1.0 + 0.5 * noise.gamma()));
}

std::vector<KrausNode> kraus_weights(ChannelNoise noise, QuadratureSpec quad) {
  quad.validate();
  if (!(noise.gamma() > 0.0)) {
    throw DomainError("kraus_weights needs gamma > 0");
  }
  const auto nodes =
      quadrature::gaussian_nodes(noise, quad.order_per_axis, quad.resolved_scale(noise));
  std::vector<KrausNode> out;
  out.reserve(nodes.alpha.size());
  double total = 0.0;
  for (std::size_t j = 0; j < nodes.alpha.size(); ++j) {
    const double w = std::exp(nodes.log_weight[j]);
    out.push_back({w, nodes.alpha[j]});
    total += w;
  }
  for (auto& node : out) node.weight /= total;
  return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, ChannelNoise noise, QuadratureSpec quad) {
  quad.validate();
  if (noise.gamma() == 0.0) {
    return rho;
  }
  const int dim = rho.dim();
  const SpectralFactor f = factorize(rho);
  const int s = static_cast<int>(f.vectors.rows());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const KrausNode& node : kraus_weights(noise, quad)) {
    add_conjugated(out, node.weight, fock::displacement_block(node.alpha, dim, s), f);
  }
  return finish(std::move(out), rho);
}

McResult apply_channel_mc(const DensityMatrix& rho, ChannelNoise noise, McSpec mc) {
  if (!(noise.gamma() > 0.0)) {
    throw DomainError("Monte-Carlo channel sampling is degenerate at gamma = 0; use apply_channel");
  }
  if (mc.samples < 1) {
    throw DomainError("Monte-Carlo channel needs at least one sample");
  }
  const int dim = rho.dim();
  const SpectralFactor f = factorize(rho);
  const int s = static_cast<int>(f.vectors.rows());
  std::mt19937_64 rng(mc.seed);
  std::normal_distribution<double> axis(0.0, std::sqrt(0.25 * noise.gamma()));

  // Running sums of the per-sample matrix and of its squared real/imag parts.
  CMatrix sum = CMatrix::Zero(dim, dim);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(dim, dim);
  CMatrix term(dim, dim);
  for (std::int64_t i = 0; i < mc.samples; ++i) {
    const double x = axis(rng);
    const double y = axis(rng);
    term.setZero();
    add_conjugated(term, 1.0, fock::displacement_block(Complex(x, y), dim, s), f);
    sum += term;
    sq_re += term.real().cwiseAbs2();
    sq_im += term.imag().cwiseAbs2();
  }
  const double n = static_cast<double>(mc.samples);
  CMatrix mean = sum / n;
  Eigen::MatrixXcd se(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      if (mc.samples == 1) {
        se(r, c) = 0.0;
        continue;
      }
      const double var_re = std::max(0.0, sq_re(r, c) / n - std::pow(mean(r, c).real(), 2)) * n / (n - 1);
      const double var_im = std::max(0.0, sq_im(r, c) / n - std::pow(mean(r, c).imag(), 2)) * n / (n - 1);
      se(r, c) = Complex(std::sqrt(var_re / n), std::sqrt(var_im / n));
    }
  }
  return {finish(std::move(mean), rho), std::move(se), mc.samples};
}

}  // namespace gaussfid::channel
