#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "gaussfid/channel.hpp"
#include "gaussfid/errors.hpp"
#include "gaussfid/phasespace.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace gaussfid;
using namespace gaussfid::phasespace;
using fock::DensityMatrix;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

PhasePoint at(Complex a) { return PhasePoint{a}; }

std::vector<DensityMatrix> battery() {
  return {
      DensityMatrix::pure(fock::number_state(0, 64)),
      DensityMatrix::pure(fock::number_state(1, 64)),
      DensityMatrix::pure(fock::number_state(2, 64)),
      DensityMatrix::pure(fock::coherent_state(1.0, 64)),
      DensityMatrix::pure(fock::squeezed_state(fock::SqueezeSpec::from_nbar(1.0), 64)),
      fock::thermal_state(fock::ThermalSpec(1.0), 64),
  };
}

double max_abs_diff(const PhaseGrid& a, const PhaseGrid& b) { return (a.values - b.values).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("ChannelNoise and PhasePoint") {
  CHECK(ChannelNoise(1.0).variance() == 0.5);
  CHECK_THROWS_AS(ChannelNoise(-0.1), DomainError);
  CHECK_THROWS_AS(ChannelNoise(std::nan("")), DomainError);
  const auto p = PhasePoint::from_quadratures(1.0, -2.0);
  CHECK(p.alpha.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p.alpha.imag() == doctest::Approx(-2.0 / std::sqrt(2.0)));
  CHECK(p.q() == doctest::Approx(1.0));
  CHECK(p.p() == doctest::Approx(-2.0));
}

TEST_CASE("GridSpec") {
  GridSpec spec{5.0, 11};
  CHECK(spec.spacing() == doctest::Approx(1.0));
  CHECK(spec.coordinate(0) == -5.0);
  CHECK(spec.coordinate(10) == doctest::Approx(5.0));
  CHECK(spec.cell_measure() == doctest::Approx(0.5));
  CHECK_THROWS_AS((GridSpec{5.0, 1}.validate()), DomainError);
  CHECK_THROWS_AS((GridSpec{-1.0, 10}.validate()), DomainError);
}

TEST_CASE("weyl_function examples") {
  gen::Source src(21);
  const auto thermal = fock::thermal_state(fock::ThermalSpec(1.0), 64);
  for (const auto& rho : battery()) {
    CHECK(std::abs(weyl_function(rho, at(0.0)) - 1.0) < 1e-12);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Complex a = src.alpha(2.5);
    const double x = std::norm(a);
    CHECK(std::abs(weyl_function(thermal, at(a)) - std::exp(-1.5 * x)) < 1e-12);
    for (int n = 0; n < 6; ++n) {
      const Complex c = weyl_function(fock::number_state(n, 16), at(a));
      CHECK(std::abs(c - std::exp(-x / 2.0) * oracle::laguerre(n, 0, x)) < 1e-12);
    }
    // Pure and density-matrix overloads agree.
    const auto psi = src.pure_state(5, 12);
    CHECK(std::abs(weyl_function(psi, at(a)) - weyl_function(DensityMatrix::pure(psi), at(a))) < 1e-13);
    CHECK(std::abs(weyl_function(psi, at(a)) - oracle::weyl(psi.amplitudes(), a)) < 1e-11);
  }
}

TEST_CASE("wigner_function examples") {
  CHECK(wigner_function(fock::number_state(0, 8), at(0.0)) == doctest::Approx(kTwoOverPi).epsilon(1e-14));
  CHECK(wigner_function(fock::number_state(1, 8), at(0.0)) == doctest::Approx(-kTwoOverPi).epsilon(1e-14));
  gen::Source src(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = src.alpha(3.0);
    for (int n = 0; n < 5; ++n) {
      CHECK(std::abs(wigner_function(fock::number_state(n, 40), at(a)) - oracle::number_wigner(n, a)) < 1e-12);
    }
    // Coherent state: Gaussian centred on alpha0.
    const Complex a0(0.6, -0.3);
    const double want = kTwoOverPi * std::exp(-2.0 * std::norm(a - a0));
    CHECK(std::abs(wigner_function(fock::coherent_state(a0, 40), at(a)) - want) < 1e-12);
  }
}

TEST_CASE("wigner_grid examples") {
  const auto vac = wigner_grid(fock::number_state(0, 32), GridSpec{5.0, 128});
  CHECK(std::abs(vac.mass() - 1.0) < 1e-6);
  CHECK(vac.coverage_ok);

  // An odd point count puts the origin on the lattice.
  const auto one = wigner_grid(fock::number_state(1, 32), GridSpec{5.0, 129});
  CHECK(one.values.minCoeff() == doctest::Approx(-kTwoOverPi).epsilon(1e-12));
  CHECK(one.values(64, 64) == doctest::Approx(-kTwoOverPi).epsilon(1e-12));
  const auto one_even = wigner_grid(fock::number_state(1, 32), GridSpec{5.0, 128});
  CHECK(one_even.values.minCoeff() == doctest::Approx(-kTwoOverPi).epsilon(2e-2));

  const auto thermal = wigner_grid(fock::thermal_state(fock::ThermalSpec(1.0), 64));
  CHECK(thermal.values.minCoeff() >= 0.0);
  // W = (2/(3 pi)) e^{-(q^2+p^2)/3}: about e^{-12} of the mass lies beyond |q| = 6.
  CHECK(std::abs(thermal.mass() - 1.0) < 1e-5);
  CHECK(thermal.mass() < 1.0);

  // Squeezed nbar=4 spills out of a narrow lattice.
  const auto squeezed = fock::squeezed_state(fock::SqueezeSpec::from_nbar(4.0), 128, 1e-5);
  const auto spill = wigner_grid(squeezed, GridSpec{2.0, 64});
  CHECK_FALSE(spill.coverage_ok);
}

TEST_CASE("weyl_damp") {
  const auto thermal = fock::thermal_state(fock::ThermalSpec(1.0), 64);
  const WeylFunction c = [&](PhasePoint p) { return weyl_function(thermal, p); };
  const auto same = weyl_damp(c, ChannelNoise(0.0));
  gen::Source src(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex a = src.alpha(3.0);
    CHECK(same(at(a)) == c(at(a)));
    for (double g : {0.5, 1.0, 3.0}) {
      const auto damped = weyl_damp(c, ChannelNoise(g));
      // Thermal nbar -> nbar + gamma/2.
      CHECK(std::abs(damped(at(a)) - std::exp(-std::norm(a) * (1.5 + g / 2.0))) < 1e-12);
      CHECK(std::abs(damped(at(0.0)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("wigner_convolve examples") {
  const GridSpec spec{6.0, 128};
  const auto vac = wigner_grid(fock::number_state(0, 32), spec);
  const auto unchanged = wigner_convolve(vac, ChannelNoise(0.0));
  CHECK(max_abs_diff(unchanged, vac) == 0.0);

  // Vacuum through gamma=1 is thermal nbar=1/2: variance per axis up by 1/2.
  const auto out = wigner_convolve(vac, ChannelNoise(1.0));
  const auto want = wigner_grid(fock::thermal_state(fock::ThermalSpec(0.5), 64), spec);
  CHECK(max_abs_diff(out, want) < 1e-6);
  CHECK(std::abs(out.mass() - vac.mass()) < 1e-6);
  CHECK(out.coverage_ok);
}

TEST_CASE("property: Fourier duality between the Weyl and Wigner grids") {
  const GridSpec target{6.0, 128};
  // The Weyl lattice is wider and finer than the Wigner lattice: squeezed
  // Weyl functions decay slowly, and the DFT kernel oscillates at rate 2|alpha|.
  const GridSpec dual{24.0, 241};
  for (const auto& rho : battery()) {
    const auto direct = wigner_grid(rho, target);
    const auto via_weyl = wigner_from_weyl(weyl_grid(rho, dual), target);
    CHECK(max_abs_diff(direct, via_weyl) < 1e-5);
  }
}

TEST_CASE("property: convolved Wigner grid matches the channel output") {
  const GridSpec spec{6.0, 128};
  const std::vector<DensityMatrix> states{
      DensityMatrix::pure(fock::number_state(1, 48)),
      DensityMatrix::pure(fock::number_state(2, 48)),
      DensityMatrix::pure(fock::coherent_state(1.0, 48)),
  };
  for (const auto& rho : states) {
    for (double g : {0.5, 1.0, 2.0}) {
      const ChannelNoise noise(g);
      const auto convolved = wigner_convolve(wigner_grid(rho, spec), noise);
      const auto direct = wigner_grid(channel::apply_channel(rho, noise), spec);
      CHECK(max_abs_diff(convolved, direct) < 1e-5);
    }
  }
}

TEST_CASE("property: Weyl damping matches the channel output") {
  gen::Source src(24);
  for (double g : {0.5, 1.0, 2.0}) {
    const ChannelNoise noise(g);
    const auto rho = src.mixed_state(3, 6, 64);
    const auto out = channel::apply_channel(rho, noise);
    for (int trial = 0; trial < 20; ++trial) {
      const Complex a = src.alpha(3.0);
      const Complex want = std::exp(-0.5 * g * std::norm(a)) * weyl_function(rho, at(a));
      CHECK(std::abs(weyl_function(out, at(a)) - want) < 1e-8);
    }
  }
}

TEST_CASE("property: Weyl function is Hermitian") {
  gen::Source src(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = src.mixed_state(src.integer(1, 4), src.integer(1, 10), 24);
    const Complex a = src.alpha(3.0);
    CHECK(std::abs(weyl_function(rho, at(-a)) - std::conj(weyl_function(rho, at(a)))) < 1e-12);
  }
}

TEST_CASE("property: Wigner grids of random states are normalised") {
  gen::Source src(26);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = src.mixed_state(2, 4, 16);
    const auto grid = wigner_grid(rho);
    CHECK(std::abs(grid.mass() - 1.0) < 1e-6);
    CHECK(grid.coverage_ok);
  }
}

TEST_CASE("write_csv") {
  PhaseGrid grid;
  grid.spec = GridSpec{1.0, 2};
  grid.values.resize(2, 2);
  grid.values << 1.0, 2.0, 3.0, 4.0;  // values(ip, iq)
  std::ostringstream out;
  write_csv(out, grid);
  CHECK(out.str() == "q,p,value\n-1,-1,1\n1,-1,2\n-1,1,3\n1,1,4\n");
}
