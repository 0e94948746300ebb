#pragma once

// Command-line front end. Everything the CLI prints is computed by the
// functions below so tests and scripts can reach the same numbers.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaussfid/fidelity.hpp"

namespace gaussfid::cli {

using fidelity::FidelityValue;
using phasespace::ChannelNoise;

enum class ThermalMode { kEntanglement, kEnsemble };

struct NumberSpec {
  int n;
};
struct CoherentSpec {
  Complex alpha;
};
struct SqueezedSpec {
  double nbar;
};
struct Superposition01Spec {};
struct ThermalStateSpec {
  double nbar;
  ThermalMode mode = ThermalMode::kEntanglement;
};

using StateSpec = std::variant<NumberSpec, CoherentSpec, SqueezedSpec, Superposition01Spec, ThermalStateSpec>;

// number:N | coherent:X | coherent:RE,IM | squeezed:NBAR | superposition01 |
// thermal:NBAR[:entanglement|ensemble]
StateSpec parse_state_spec(std::string_view text);
std::string to_string(const StateSpec& spec);

bool is_pure(const StateSpec& spec);
/// Throws DomainError for thermal specs.
fock::TruncatedPureState build_pure(const StateSpec& spec, int dim, double tail_tol);
fock::DensityMatrix build_density(const StateSpec& spec, int dim, double tail_tol);

enum class Route { kWeyl, kDirect, kWigner, kAGamma, kClosed, kPurification, kMonteCarlo };

Route parse_route(std::string_view text);
std::string_view to_string(Route route);

struct EvalOptions {
  int dim = fock::kDefaultDim;
  int two_mode_dim = fock::kDefaultTwoModeDim;
  double tail_tol = fock::kDefaultTailTol;
  int quad_order = channel::kDefaultQuadOrder;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  int ensemble_cutoff = fidelity::kDefaultEnsembleCutoff;
};

// Routes that build a two-copy or purified state (a-gamma, purification)
// truncate at two_mode_dim; every other route uses dim.
FidelityValue evaluate(const StateSpec& spec, ChannelNoise noise, Route route, const EvalOptions& options = {});

struct CurveRequest {
  StateSpec state = NumberSpec{0};
  double gamma_min = 0.0;
  double gamma_max = 4.0;
  int steps = 17;
  Route method = Route::kWeyl;

  void validate() const;
  double gamma_at(int step) const;
};

struct CurvePoint {
  double gamma;
  FidelityValue value;
};

std::vector<CurvePoint> compute_curve(const CurveRequest& request, const EvalOptions& options = {});
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

/// |0>, |1>, |2>, coherent(1), squeezed nbar=1, thermal nbar=1.
std::vector<StateSpec> state_battery();

struct VerifyOptions {
  std::optional<StateSpec> state;
  std::optional<double> gamma;
  int trials = 50;
  std::uint64_t seed = 0;
  EvalOptions eval;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  // Largest residual met, next to the tolerance it was held to.
  double worst = 0.0;
  double tolerance = 0.0;
  int checks = 0;
  std::string detail;
};

const std::vector<std::string>& suite_names();
SuiteResult run_suite(std::string_view name, const VerifyOptions& options);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAccuracy = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussfid::cli
