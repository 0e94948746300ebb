#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "gaussfid/channel.hpp"
#include "gaussfid/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace gaussfid;
using namespace gaussfid::channel;
using fock::DensityMatrix;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<DensityMatrix> battery(int dim) {
  return {
      DensityMatrix::pure(fock::number_state(0, dim)),
      DensityMatrix::pure(fock::number_state(1, dim)),
      DensityMatrix::pure(fock::number_state(2, dim)),
      DensityMatrix::pure(fock::coherent_state(1.0, dim)),
      DensityMatrix::pure(fock::squeezed_state(fock::SqueezeSpec::from_nbar(1.0), dim)),
      fock::thermal_state(fock::ThermalSpec(1.0), dim),
  };
}

// Largest |mc - quad| in units of the per-element standard error, real and
// imaginary parts separately; elements with no spread must agree to `floor`.
double worst_sigma(const McResult& mc, const DensityMatrix& quad, double floor) {
  double worst = 0.0;
  for (int r = 0; r < quad.dim(); ++r) {
    for (int c = 0; c < quad.dim(); ++c) {
      const Complex d = mc.rho(r, c) - quad(r, c);
      const Complex se = mc.std_error(r, c);
      worst = std::max(worst, std::max(0.0, std::abs(d.real()) - floor) / std::max(se.real(), 1e-300));
      worst = std::max(worst, std::max(0.0, std::abs(d.imag()) - floor) / std::max(se.imag(), 1e-300));
    }
  }
  return worst;
}

int adequate_dim(const std::function<fock::TruncatedPureState(int)>& make, phasespace::ChannelNoise noise) {
  for (int dim = 4;; ++dim) {
    try {
      if (apply_channel(DensityMatrix::pure(make(dim)), noise).trace_deficit() <= 1e-7) return dim;
    } catch (const AccuracyError&) {
    } catch (const TruncationError&) {
    }
  }
}

}  // namespace

TEST_CASE("QuadratureSpec validation") {
  CHECK_THROWS_AS((QuadratureSpec{0, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((QuadratureSpec{10, -1.0}.validate()), DomainError);
  CHECK_NOTHROW((QuadratureSpec{1, 0.0}.validate()));
  CHECK(QuadratureSpec{}.order_per_axis == 40);
}

TEST_CASE("kraus_weights") {
  for (double g : {0.25, 1.0, 4.0}) {
    const auto nodes = kraus_weights(phasespace::ChannelNoise(g));
    double total = 0.0;
    for (const auto& n : nodes) {
      CHECK(n.weight > 0.0);
      total += n.weight;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    // Product rule on a symmetric lattice: node j and node N-1-j are mirror images.
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const auto& mirror = nodes[nodes.size() - 1 - j];
      CHECK(std::abs(mirror.alpha + nodes[j].alpha) < 1e-14);
      CHECK(mirror.weight == doctest::Approx(nodes[j].weight).epsilon(1e-13));
    }
  }
  const auto single = kraus_weights(phasespace::ChannelNoise(1.0), QuadratureSpec{1, 0.0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].weight == doctest::Approx(1.0));
  CHECK(std::abs(single[0].alpha) < 1e-15);
  CHECK_THROWS_AS(kraus_weights(phasespace::ChannelNoise(0.0)), DomainError);
}

TEST_CASE("apply_channel examples") {
  gen::Source src(31);
  const auto rho = src.mixed_state(3, 8, 32);
  const auto same = apply_channel(rho, phasespace::ChannelNoise(0.0));
  CHECK(same.matrix() == rho.matrix());

  for (double g : {0.5, 1.0, 2.0}) {
    const phasespace::ChannelNoise noise(g);
    const auto vac_out = apply_channel(DensityMatrix::pure(fock::number_state(0, 64)), noise);
    const auto thermal = fock::thermal_state(fock::ThermalSpec(g / 2.0), 64);
    CHECK(max_abs(vac_out.matrix() - thermal.matrix()) < 1e-10);

    const auto th_out = apply_channel(fock::thermal_state(fock::ThermalSpec(0.7), 64), noise);
    const auto th_want = fock::thermal_state(fock::ThermalSpec(0.7 + g / 2.0), 64);
    CHECK(max_abs(th_out.matrix() - th_want.matrix()) < 1e-10);
  }
}

TEST_CASE("apply_channel on |1> against frozen brute-force values") {
  // Frozen from oracle::channel_brute; the first four are exact rationals.
  const double want[] = {2.0 / 9.0, 10.0 / 27.0, 2.0 / 9.0, 26.0 / 243.0, 0.046639231824417, 0.019204389574760};
  const auto out = apply_channel(DensityMatrix::pure(fock::number_state(1, 40)), phasespace::ChannelNoise(1.0));
  for (int n = 0; n < 6; ++n) CHECK(out(n, n).real() == doctest::Approx(want[n]).epsilon(1e-12));
}

TEST_CASE("apply_channel matches the brute-force oracle on a random state") {
  gen::Source src(32);
  const auto rho = src.mixed_state(2, 3, 16);
  const CMatrix ref = oracle::channel_brute(rho.matrix(), 0.8, 0, 4.5, 81);
  const auto out = apply_channel(rho, phasespace::ChannelNoise(0.8));
  CHECK(max_abs(out.matrix().topLeftCorner(6, 6) - ref.topLeftCorner(6, 6)) < 1e-9);
}

TEST_CASE("apply_channel refuses to lose trace silently") {
  // |1> at dim 4 through gamma = 4 pushes most weight past |3>.
  CHECK_THROWS_AS(apply_channel(DensityMatrix::pure(fock::number_state(1, 4)), phasespace::ChannelNoise(4.0)),
                  AccuracyError);
}

TEST_CASE("property: trace, Hermiticity and positivity") {
  gen::Source src(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = src.mixed_state(src.integer(1, 4), src.integer(1, 12), 96);
    const phasespace::ChannelNoise noise(src.uniform(0.1, 3.0));
    const auto out = apply_channel(rho, noise);
    CHECK(std::abs(out.trace() - rho.trace()) < 1e-9);
    CHECK(max_abs(out.matrix() - out.matrix().adjoint()) < 1e-14);
    CHECK(out.min_eigenvalue() >= -1e-9);
  }
}

TEST_CASE("property: mean amplitude is preserved") {
  for (double g : {0.5, 1.0, 2.0}) {
    for (const auto& rho : battery(64)) {
      const auto out = apply_channel(rho, phasespace::ChannelNoise(g));
      CHECK(std::abs(out.mean_annihilation() - rho.mean_annihilation()) < 1e-8);
    }
  }
  const auto shifted = DensityMatrix::pure(fock::coherent_state(Complex(0.8, -0.5), 64));
  const auto out = apply_channel(shifted, phasespace::ChannelNoise(1.5));
  CHECK(std::abs(out.mean_annihilation() - Complex(0.8, -0.5)) < 1e-8);
  // Energy grows by gamma/2.
  CHECK(out.mean_number() == doctest::Approx(shifted.mean_number() + 0.75).epsilon(1e-8));
}

TEST_CASE("property: semigroup composition") {
  gen::Source src(34);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rho = src.mixed_state(2, 5, 64);
    const double g1 = src.uniform(0.2, 1.5);
    const double g2 = src.uniform(0.2, 1.5);
    const auto twice = apply_channel(apply_channel(rho, phasespace::ChannelNoise(g1)), phasespace::ChannelNoise(g2));
    const auto once = apply_channel(rho, phasespace::ChannelNoise(g1 + g2));
    CHECK(max_abs(twice.matrix() - once.matrix()) < 1e-7);
  }
}

TEST_CASE("property: unitality on the low block") {
  // Phi(I) = I: a flat mixture over |0>..|63> keeps the low diagonal flat.
  const int levels = 64;
  const int dim = 128;
  CMatrix flat = CMatrix::Zero(dim, dim);
  flat.topLeftCorner(levels, levels) = CMatrix::Identity(levels, levels) / levels;
  for (double g : {0.5, 1.0}) {
    const auto out = apply_channel(DensityMatrix::from_matrix(flat), phasespace::ChannelNoise(g));
    const CMatrix block = out.matrix().topLeftCorner(12, 12) * levels;
    CHECK(max_abs(block - CMatrix::Identity(12, 12)) < 1e-8);
  }
}

TEST_CASE("apply_channel_mc examples") {
  const auto rho = DensityMatrix::pure(fock::number_state(1, 16));
  const phasespace::ChannelNoise noise(1.0);
  CHECK_THROWS_AS(apply_channel_mc(rho, phasespace::ChannelNoise(0.0), McSpec{10, 0}), DomainError);

  // One sample is the single conjugation by the seeded draw.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> axis(0.0, std::sqrt(0.25));
  const double x = axis(rng);
  const double y = axis(rng);
  const CMatrix d = oracle::displacement(Complex(x, y), 40).topLeftCorner(16, 40);
  CMatrix padded = CMatrix::Zero(40, 40);
  padded.topLeftCorner(16, 16) = rho.matrix();
  const CMatrix want = d * padded * d.adjoint();
  const auto one = apply_channel_mc(rho, noise, McSpec{1, 99});
  CHECK(max_abs(one.rho.matrix() - want.topLeftCorner(16, 16)) < 1e-12);

  const auto a = apply_channel_mc(rho, noise, McSpec{2000, 5});
  const auto b = apply_channel_mc(rho, noise, McSpec{2000, 5});
  CHECK(a.rho.matrix() == b.rho.matrix());
  CHECK(a.std_error == b.std_error);
  const auto c = apply_channel_mc(rho, noise, McSpec{2000, 6});
  CHECK(c.rho.matrix() != a.rho.matrix());
}

TEST_CASE("apply_channel_mc standard error shrinks as samples^-1/2") {
  const auto rho = DensityMatrix::pure(fock::number_state(1, 16));
  const phasespace::ChannelNoise noise(1.0);
  const auto small = apply_channel_mc(rho, noise, McSpec{2000, 1});
  const auto large = apply_channel_mc(rho, noise, McSpec{32000, 1});
  const double ratio = small.std_error(1, 1).real() / large.std_error(1, 1).real();
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("property: Monte-Carlo and quadrature agree within 4 standard errors") {
  // Each state is truncated at the smallest dim whose channel output keeps
  // its trace to 1e-7. Past that, the far-tail elements sit below 1/samples
  // and their sample means are too skewed for a standard-error comparison.
  const std::vector<std::function<fock::TruncatedPureState(int)>> states{
      [](int dim) { return fock::number_state(1, dim); },
      [](int dim) { return fock::coherent_state(1.0, dim, 1e-3); },
  };
  for (const auto& make : states) {
    for (double g : {0.5, 1.0, 2.0}) {
      const phasespace::ChannelNoise noise(g);
      const int dim = adequate_dim(make, noise);
      const auto rho = DensityMatrix::pure(make(dim));
      const auto quad = apply_channel(rho, noise);
      const auto mc = apply_channel_mc(rho, noise, McSpec{100000, 0});
      CAPTURE(g);
      CAPTURE(dim);
      CHECK(worst_sigma(mc, quad, 1e-12) <= 4.0);
    }
  }
}
