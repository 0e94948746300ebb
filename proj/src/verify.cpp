// Invariant suites behind `gaussfid verify`.

#include <algorithm>
#include <cmath>
#include <random>

#include "gaussfid/cli.hpp"
#include "gaussfid/closedform.hpp"
#include "gaussfid/errors.hpp"
#include "gaussfid/format.hpp"

namespace gaussfid::cli {

namespace {

// Keeps the check with the largest residual/tolerance ratio.
class Tracker {
 public:
  explicit Tracker(std::string name) { result_.name = std::move(name); }

  void check(double residual, double tolerance, const std::string& what) {
    ++result_.checks;
    const double ratio = residual / tolerance;
    if (!(ratio <= worst_ratio_) || result_.checks == 1) {
      worst_ratio_ = std::isnan(ratio) ? INFINITY : ratio;
      result_.worst = residual;
      result_.tolerance = tolerance;
      result_.detail = "worst at " + what;
    }
  }

  void require(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok && failure_.empty()) failure_ = what;
  }

  SuiteResult finish() {
    result_.passed = failure_.empty() && worst_ratio_ <= 1.0;
    if (!failure_.empty()) result_.detail = "violated: " + failure_;
    return result_;
  }

 private:
  SuiteResult result_;
  double worst_ratio_ = 0.0;
  std::string failure_;
};

std::string at(const StateSpec& spec, double gamma) {
  return to_string(spec) + " gamma=" + format_number(gamma);
}

std::vector<StateSpec> states_of(const VerifyOptions& o) {
  return o.state ? std::vector<StateSpec>{*o.state} : state_battery();
}

std::vector<double> gammas_of(const VerifyOptions& o, std::vector<double> ladder) {
  return o.gamma ? std::vector<double>{*o.gamma} : ladder;
}

SuiteResult scaling_suite(const VerifyOptions& o) {
  constexpr double kQuadTol = 1e-7;
  constexpr double kClosedTol = 1e-12;
  Tracker t("scaling");
  for (auto spec : states_of(o)) {
    // The law rests on |C_psi|^2 being the Wigner autocorrelation, true for
    // pure states and hence for ensembles of them but not for the
    // entanglement fidelity of a mixed state.
    if (auto* thermal = std::get_if<ThermalStateSpec>(&spec)) thermal->mode = ThermalMode::kEnsemble;
    for (double g : gammas_of(o, {0.25, 0.5, 1.0, 4.0})) {
      if (!(g > 0.0)) throw DomainError("the scaling law needs gamma > 0");
      const ChannelNoise here(g);
      const ChannelNoise dual(4.0 / g);
      const double quad = std::abs(evaluate(spec, here, Route::kWeyl, o.eval).raw -
                                   2.0 / g * evaluate(spec, dual, Route::kWeyl, o.eval).raw);
      t.check(quad, kQuadTol, at(spec, g) + " (quadrature)");
      const double closed = std::abs(evaluate(spec, here, Route::kClosed, o.eval).raw -
                                     2.0 / g * evaluate(spec, dual, Route::kClosed, o.eval).raw);
      t.check(closed, kClosedTol, at(spec, g) + " (closed form)");
    }
  }
  return t.finish();
}

SuiteResult bound_suite(const VerifyOptions& o) {
  constexpr double kSaturationTol = 1e-8;
  Tracker t("bound");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> support(1, 12);
  std::uniform_real_distribution<double> gamma_draw(0.05, 4.0);
  for (int trial = 0; trial < o.trials; ++trial) {
    const int s = support(rng);
    std::vector<Complex> coeffs(static_cast<std::size_t>(s));
    for (auto& c : coeffs) c = Complex(normal(rng), normal(rng));
    const double g = o.gamma ? *o.gamma : gamma_draw(rng);
    const ChannelNoise noise(g);
    const auto f = fidelity::fidelity_pure(fock::superposition(coeffs, o.eval.dim), noise);
    const double excess = f.raw - closedform::max_fidelity(noise);
    t.require(excess <= fidelity::kValueSlack,
              "random state " + std::to_string(trial) + " exceeds the bound by " + format_number(excess));
    t.check(std::max(0.0, excess), fidelity::kValueSlack, "random state " + std::to_string(trial));
  }
  for (double x : {0.0, 1.0, 2.0}) {
    for (double g : gammas_of(o, {0.5, 1.0, 2.0})) {
      const ChannelNoise noise(g);
      const StateSpec spec = CoherentSpec{Complex(x, 0.0)};
      const double f = evaluate(spec, noise, Route::kWeyl, o.eval).raw;
      t.check(std::abs(f - closedform::max_fidelity(noise)), kSaturationTol, at(spec, g) + " saturation");
    }
  }
  return t.finish();
}

SuiteResult routes_suite(const VerifyOptions& o) {
  constexpr double kTol = 1e-6;
  constexpr double kGridTol = 1e-4;
  constexpr double kPurificationTol = 1e-4;
  Tracker t("routes");
  for (const auto& spec : states_of(o)) {
    for (double g : gammas_of(o, {0.5, 1.0, 2.0, 4.0})) {
      const ChannelNoise noise(g);
      const double closed = evaluate(spec, noise, Route::kClosed, o.eval).raw;
      if (const auto* thermal = std::get_if<ThermalStateSpec>(&spec)) {
        if (thermal->mode == ThermalMode::kEnsemble) {
          t.check(std::abs(evaluate(spec, noise, Route::kWeyl, o.eval).raw - closed), kTol, at(spec, g));
          continue;
        }
        const auto rho = build_density(spec, o.eval.dim, o.eval.tail_tol);
        const double weyl = fidelity::entanglement_fidelity(rho, noise).raw;
        t.check(std::abs(weyl - closed), kTol, at(spec, g) + " weyl vs closed");
        // The purified state lives at the small two-mode dim; its truncation
        // error dominates the comparison.
        EvalOptions small = o.eval;
        small.tail_tol = std::max(small.tail_tol, kPurificationTol);
        const double purified = evaluate(spec, noise, Route::kPurification, small).raw;
        t.check(std::abs(purified - closed), kPurificationTol, at(spec, g) + " purification vs closed");
        continue;
      }
      const auto psi = build_pure(spec, o.eval.dim, o.eval.tail_tol);
      const double weyl = fidelity::fidelity_pure(psi, noise).raw;
      t.check(std::abs(weyl - closed), kTol, at(spec, g) + " weyl vs closed");
      t.check(std::abs(fidelity::fidelity_pure_direct(psi, noise).raw - weyl), kTol, at(spec, g) + " direct");
      t.check(std::abs(fidelity::fidelity_wigner(psi, noise).raw - weyl), kGridTol, at(spec, g) + " wigner");
      // A_gamma compares against the Weyl route on the same two-mode-size state.
      const auto small = build_pure(spec, o.eval.two_mode_dim, std::max(o.eval.tail_tol, 1e-3));
      t.check(std::abs(fidelity::fidelity_a_gamma(small, noise).raw - fidelity::fidelity_pure(small, noise).raw),
              kTol, at(spec, g) + " a-gamma");
    }
  }
  return t.finish();
}

SuiteResult genfun_suite(const VerifyOptions& o) {
  constexpr double kTol = 1e-8;
  constexpr int kTerms = 40;
  Tracker t("genfun");
  const int dim = std::max(o.eval.dim, kTerms + 1);
  for (double g : gammas_of(o, {0.5, 1.0, 2.0, 3.0})) {
    const ChannelNoise noise(g);
    // F(|n>, gamma) from the quadrature route, computed once per gamma.
    std::vector<double> f(kTerms + 1);
    for (int n = 0; n <= kTerms; ++n) {
      channel::QuadratureSpec quad;
      quad.order_per_axis = std::max(o.eval.quad_order, 2 * n + 2);
      f[n] = fidelity::fidelity_pure(fock::number_state(n, dim), noise, quad).raw;
    }
    for (double lambda : {0.2, 0.5}) {
      double partial = 0.0;
      double power = 1.0;
      for (int n = 0; n <= kTerms; ++n) {
        partial += power * f[n];
        power *= lambda;
      }
      // Every term obeys F <= 1/(1 + gamma/2).
      const double tail = power / (1.0 - lambda) * closedform::max_fidelity(noise);
      const double residual = std::abs(partial - closedform::generating_function(noise, lambda));
      t.check(residual, kTol + tail,
              "gamma=" + format_number(g) + " lambda=" + format_number(lambda));
    }
  }
  return t.finish();
}

SuiteResult thermal_suite(const VerifyOptions& o) {
  constexpr double kTol = 1e-6;
  Tracker t("thermal");
  double nbar = 1.0;
  if (o.state) {
    const auto* thermal = std::get_if<ThermalStateSpec>(&*o.state);
    if (!thermal) throw DomainError("the thermal suite takes a thermal state spec");
    nbar = thermal->nbar;
  }
  std::vector<double> ladder;
  for (int i = 1; i <= 16; ++i) ladder.push_back(0.25 * i);
  const auto rho = fock::thermal_state(fock::ThermalSpec(nbar), o.eval.dim, o.eval.tail_tol);
  const int cutoff = std::min(o.eval.ensemble_cutoff, o.eval.dim - 1);
  const auto ensemble = fidelity::Ensemble::bose_einstein(nbar, cutoff, o.eval.dim);
  for (double g : gammas_of(o, ladder)) {
    const ChannelNoise noise(g);
    const double lower = closedform::thermal_entanglement_fidelity(nbar, noise);
    const double middle = closedform::thermal_ensemble_fidelity(nbar, noise);
    const double upper = closedform::max_fidelity(noise);
    const std::string where = "nbar=" + format_number(nbar) + " gamma=" + format_number(g);
    if (nbar > 0.0 && g > 0.0) {
      t.require(lower < middle && middle < upper, "ordering at " + where);
    }
    t.check(std::abs(fidelity::entanglement_fidelity(rho, noise).raw - lower), kTol, where + " entanglement");
    t.check(std::abs(fidelity::ensemble_fidelity(ensemble, noise).raw - middle), kTol, where + " ensemble");
  }
  return t.finish();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"scaling", "bound", "routes", "genfun", "thermal"};
  return names;
}

SuiteResult run_suite(std::string_view name, const VerifyOptions& options) {
  if (name == "scaling") return scaling_suite(options);
  if (name == "bound") return bound_suite(options);
  if (name == "routes") return routes_suite(options);
  if (name == "genfun") return genfun_suite(options);
  if (name == "thermal") return thermal_suite(options);
  throw DomainError("unknown suite '" + std::string(name) + "'");
}

}  // namespace gaussfid::cli
