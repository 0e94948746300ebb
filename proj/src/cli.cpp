#include "gaussfid/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "gaussfid/closedform.hpp"
#include "gaussfid/errors.hpp"
#include "gaussfid/format.hpp"

namespace gaussfid::cli {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view token, std::string_view spec) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size() || !std::isfinite(value)) {
    throw DomainError("cannot read a number from '" + std::string(token) + "' in state spec '" +
                      std::string(spec) + "'");
  }
  return value;
}

int parse_count(std::string_view token, std::string_view spec) {
  int value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size() || value < 0) {
    throw DomainError("number-state index must be a nonnegative integer in '" + std::string(spec) + "'");
  }
  return value;
}

void require_args(const std::vector<std::string_view>& parts, std::size_t lo, std::size_t hi,
                  std::string_view spec) {
  if (parts.size() < lo || parts.size() > hi) {
    throw DomainError("malformed state spec '" + std::string(spec) + "'");
  }
}

double rounded(double value) { return std::stod(format_number(value)); }

FidelityValue closed_value(double value) {
  return FidelityValue::make(value, fidelity::Method::kClosedForm, 0.0);
}

FidelityValue closed_form(const StateSpec& spec, ChannelNoise noise) {
  return std::visit(
      Overloaded{
          [&](const NumberSpec& s) { return closed_value(closedform::fidelity_number(s.n, noise)); },
          [&](const CoherentSpec&) { return closed_value(closedform::max_fidelity(noise)); },
          [&](const SqueezedSpec& s) { return closed_value(closedform::fidelity_squeezed(s.nbar, noise)); },
          [&](const Superposition01Spec&) { return closed_value(closedform::fidelity_superposition01(noise)); },
          [&](const ThermalStateSpec& s) {
            return closed_value(s.mode == ThermalMode::kEnsemble
                                    ? closedform::thermal_ensemble_fidelity(s.nbar, noise)
                                    : closedform::thermal_entanglement_fidelity(s.nbar, noise));
          },
      },
      spec);
}

channel::QuadratureSpec quad_of(const EvalOptions& options) {
  channel::QuadratureSpec quad;
  quad.order_per_axis = options.quad_order;
  quad.validate();
  return quad;
}

[[noreturn]] void unsupported(const StateSpec& spec, Route route) {
  throw DomainError("route '" + std::string(to_string(route)) + "' is not available for state '" +
                    to_string(spec) + "'");
}

}  // namespace

StateSpec parse_state_spec(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string_view kind = parts.front();
  if (kind == "number") {
    require_args(parts, 2, 2, text);
    return NumberSpec{parse_count(parts[1], text)};
  }
  if (kind == "coherent") {
    require_args(parts, 2, 2, text);
    const auto xy = split(parts[1], ',');
    require_args(xy, 1, 2, text);
    const double re = parse_real(xy[0], text);
    const double im = xy.size() == 2 ? parse_real(xy[1], text) : 0.0;
    return CoherentSpec{Complex(re, im)};
  }
  if (kind == "squeezed") {
    require_args(parts, 2, 2, text);
    const double nbar = parse_real(parts[1], text);
    if (nbar < 0.0) throw DomainError("squeezed nbar must be >= 0");
    return SqueezedSpec{nbar};
  }
  if (kind == "superposition01") {
    require_args(parts, 1, 1, text);
    return Superposition01Spec{};
  }
  if (kind == "thermal") {
    require_args(parts, 2, 3, text);
    ThermalStateSpec spec{parse_real(parts[1], text)};
    if (spec.nbar < 0.0) throw DomainError("thermal nbar must be >= 0");
    if (parts.size() == 3) {
      if (parts[2] == "entanglement") {
        spec.mode = ThermalMode::kEntanglement;
      } else if (parts[2] == "ensemble") {
        spec.mode = ThermalMode::kEnsemble;
      } else {
        throw DomainError("thermal mode must be 'entanglement' or 'ensemble' in '" + std::string(text) + "'");
      }
    }
    return spec;
  }
  throw DomainError("unknown state kind in '" + std::string(text) + "'");
}

std::string to_string(const StateSpec& spec) {
  return std::visit(
      Overloaded{
          [](const NumberSpec& s) { return "number:" + std::to_string(s.n); },
          [](const CoherentSpec& s) {
            return "coherent:" + format_number(s.alpha.real()) + "," + format_number(s.alpha.imag());
          },
          [](const SqueezedSpec& s) { return "squeezed:" + format_number(s.nbar); },
          [](const Superposition01Spec&) { return std::string("superposition01"); },
          [](const ThermalStateSpec& s) {
            return "thermal:" + format_number(s.nbar) +
                   (s.mode == ThermalMode::kEnsemble ? ":ensemble" : ":entanglement");
          },
      },
      spec);
}

bool is_pure(const StateSpec& spec) { return !std::holds_alternative<ThermalStateSpec>(spec); }

fock::TruncatedPureState build_pure(const StateSpec& spec, int dim, double tail_tol) {
  return std::visit(
      Overloaded{
          [&](const NumberSpec& s) { return fock::number_state(s.n, dim); },
          [&](const CoherentSpec& s) { return fock::coherent_state(s.alpha, dim, tail_tol); },
          [&](const SqueezedSpec& s) {
            return fock::squeezed_state(fock::SqueezeSpec::from_nbar(s.nbar), dim, tail_tol);
          },
          [&](const Superposition01Spec&) { return fock::superposition01(dim); },
          [&](const ThermalStateSpec&) -> fock::TruncatedPureState {
            throw DomainError("a thermal state has no pure-state representation");
          },
      },
      spec);
}

fock::DensityMatrix build_density(const StateSpec& spec, int dim, double tail_tol) {
  if (const auto* thermal = std::get_if<ThermalStateSpec>(&spec)) {
    return fock::thermal_state(fock::ThermalSpec(thermal->nbar), dim, tail_tol);
  }
  return fock::DensityMatrix::pure(build_pure(spec, dim, tail_tol));
}

Route parse_route(std::string_view text) {
  if (text == "weyl") return Route::kWeyl;
  if (text == "direct") return Route::kDirect;
  if (text == "wigner") return Route::kWigner;
  if (text == "a-gamma") return Route::kAGamma;
  if (text == "closed") return Route::kClosed;
  if (text == "purification") return Route::kPurification;
  if (text == "mc") return Route::kMonteCarlo;
  throw DomainError("unknown method '" + std::string(text) +
                    "'; expected weyl, direct, wigner, a-gamma, closed, purification or mc");
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::kWeyl: return "weyl";
    case Route::kDirect: return "direct";
    case Route::kWigner: return "wigner";
    case Route::kAGamma: return "a-gamma";
    case Route::kClosed: return "closed";
    case Route::kPurification: return "purification";
    case Route::kMonteCarlo: return "mc";
  }
  return "unknown";
}

FidelityValue evaluate(const StateSpec& spec, ChannelNoise noise, Route route, const EvalOptions& options) {
  if (route == Route::kClosed) {
    return closed_form(spec, noise);
  }
  const auto quad = quad_of(options);
  if (const auto* thermal = std::get_if<ThermalStateSpec>(&spec)) {
    if (thermal->mode == ThermalMode::kEnsemble) {
      if (route != Route::kWeyl) unsupported(spec, route);
      const int cutoff = std::min(options.ensemble_cutoff, options.dim - 1);
      return fidelity::ensemble_fidelity(fidelity::Ensemble::bose_einstein(thermal->nbar, cutoff, options.dim),
                                         noise, quad);
    }
    if (route == Route::kWeyl) {
      return fidelity::entanglement_fidelity(build_density(spec, options.dim, options.tail_tol), noise, quad);
    }
    if (route == Route::kPurification) {
      return fidelity::entanglement_fidelity_via_purification(
          build_density(spec, options.two_mode_dim, options.tail_tol), noise, quad);
    }
    unsupported(spec, route);
  }
  switch (route) {
    case Route::kWeyl:
      return fidelity::fidelity_pure(build_pure(spec, options.dim, options.tail_tol), noise, quad);
    case Route::kDirect:
      return fidelity::fidelity_pure_direct(build_pure(spec, options.dim, options.tail_tol), noise, quad);
    case Route::kWigner:
      return fidelity::fidelity_wigner(build_pure(spec, options.dim, options.tail_tol), noise);
    case Route::kAGamma:
      return fidelity::fidelity_a_gamma(build_pure(spec, options.two_mode_dim, options.tail_tol), noise);
    case Route::kPurification:
      return fidelity::entanglement_fidelity_via_purification(
          build_density(spec, options.two_mode_dim, options.tail_tol), noise, quad);
    case Route::kMonteCarlo:
      return fidelity::fidelity_pure_mc(build_pure(spec, options.dim, options.tail_tol), noise,
                                        channel::McSpec{options.samples, options.seed});
    case Route::kClosed:
      break;
  }
  unsupported(spec, route);
}

void CurveRequest::validate() const {
  if (!(gamma_min >= 0.0) || !(gamma_max > gamma_min) || !std::isfinite(gamma_max)) {
    throw DomainError("curve needs 0 <= gamma_min < gamma_max");
  }
  if (steps < 2) {
    throw DomainError("curve needs steps >= 2");
  }
}

double CurveRequest::gamma_at(int step) const {
  if (step == steps - 1) return gamma_max;
  return gamma_min + (gamma_max - gamma_min) * step / (steps - 1);
}

std::vector<CurvePoint> compute_curve(const CurveRequest& request, const EvalOptions& options) {
  request.validate();
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(request.steps));
  for (int i = 0; i < request.steps; ++i) {
    const double gamma = request.gamma_at(i);
    curve.push_back({gamma, evaluate(request.state, ChannelNoise(gamma), request.method, options)});
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "gamma,fidelity,method,error_estimate\n";
  for (const auto& point : curve) {
    out << format_number(point.gamma) << ',' << format_number(point.value.value) << ','
        << fidelity::to_string(point.value.method) << ',' << format_number(point.value.error_estimate) << '\n';
  }
}

std::vector<StateSpec> state_battery() {
  return {NumberSpec{0}, NumberSpec{1}, NumberSpec{2}, CoherentSpec{Complex(1.0, 0.0)}, SqueezedSpec{1.0},
          ThermalStateSpec{1.0, ThermalMode::kEntanglement}};
}

namespace {

struct Common {
  std::string state;
  std::string method = "weyl";
  EvalOptions eval;
  bool json = false;
  std::string out_path;
};

void add_eval_flags(CLI::App& cmd, Common& common) {
  cmd.add_option("--dim", common.eval.dim, "Fock truncation dim")->capture_default_str()->check(CLI::Range(1, 4096));
  cmd.add_option("--two-mode-dim", common.eval.two_mode_dim, "Per-mode dim for a-gamma and purification")
      ->capture_default_str()
      ->check(CLI::Range(1, fidelity::kMaxTwoModeDim));
  cmd.add_option("--tail-tol", common.eval.tail_tol, "Largest probability a state constructor may drop")
      ->capture_default_str();
  cmd.add_option("--quad-order", common.eval.quad_order, "Gauss-Hermite points per axis")
      ->capture_default_str()
      ->check(CLI::Range(1, 400));
  cmd.add_option("--samples", common.eval.samples, "Monte-Carlo samples")->capture_default_str();
  cmd.add_option("--seed", common.eval.seed, "Monte-Carlo seed")->capture_default_str();
  cmd.add_flag("--json", common.json, "Machine-readable output");
}

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DomainError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int cmd_fidelity(const Common& c, double gamma, std::ostream& out) {
  const StateSpec spec = parse_state_spec(c.state);
  const Route route = parse_route(c.method);
  const FidelityValue f = evaluate(spec, ChannelNoise(gamma), route, c.eval);
  if (c.json) {
    nlohmann::ordered_json j;
    j["state"] = to_string(spec);
    j["gamma"] = rounded(gamma);
    j["fidelity"] = rounded(f.value);
    j["method"] = fidelity::to_string(f.method);
    j["error_estimate"] = rounded(f.error_estimate);
    out << j.dump() << '\n';
  } else {
    out << "fidelity=" << format_number(f.value) << " method=" << fidelity::to_string(f.method)
        << " error_estimate=" << format_number(f.error_estimate) << '\n';
  }
  return kExitOk;
}

int cmd_curve(const Common& c, CurveRequest request, std::ostream& out) {
  request.state = parse_state_spec(c.state);
  request.method = parse_route(c.method);
  const auto curve = compute_curve(request, c.eval);
  Sink sink(c.out_path, out);
  if (c.json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& p : curve) {
      rows.push_back({{"gamma", rounded(p.gamma)},
                      {"fidelity", rounded(p.value.value)},
                      {"method", fidelity::to_string(p.value.method)},
                      {"error_estimate", rounded(p.value.error_estimate)}});
    }
    nlohmann::ordered_json j;
    j["state"] = to_string(request.state);
    j["rows"] = rows;
    *sink << j.dump(2) << '\n';
  } else {
    write_curve_csv(*sink, curve);
  }
  return kExitOk;
}

int cmd_verify(const Common& c, const std::vector<std::string>& suites, std::optional<double> gamma, int trials,
               std::ostream& out) {
  VerifyOptions options;
  if (!c.state.empty()) options.state = parse_state_spec(c.state);
  if (gamma) options.gamma = ChannelNoise(*gamma).gamma();
  options.trials = trials;
  options.seed = c.eval.seed;
  options.eval = c.eval;
  const std::vector<std::string>& chosen = suites.empty() ? suite_names() : suites;
  bool all = true;
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  for (const auto& name : chosen) {
    const SuiteResult r = run_suite(name, options);
    all = all && r.passed;
    if (c.json) {
      report.push_back({{"suite", r.name},
                        {"passed", r.passed},
                        {"checks", r.checks},
                        {"worst", rounded(r.worst)},
                        {"tolerance", rounded(r.tolerance)},
                        {"detail", r.detail}});
    } else {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << " checks=" << r.checks
          << " worst=" << format_number(r.worst) << " tolerance=" << format_number(r.tolerance);
      if (!r.detail.empty()) out << " (" << r.detail << ")";
      out << '\n';
    }
  }
  if (c.json) out << report.dump(2) << '\n';
  return all ? kExitOk : kExitAccuracy;
}

int cmd_channel(const Common& c, double gamma, std::ostream& out) {
  const StateSpec spec = parse_state_spec(c.state);
  const ChannelNoise noise(gamma);
  const fock::DensityMatrix rho = build_density(spec, c.eval.dim, c.eval.tail_tol);
  fock::DensityMatrix result = rho;
  std::string route = "quadrature";
  if (c.method == "mc") {
    result = channel::apply_channel_mc(rho, noise, channel::McSpec{c.eval.samples, c.eval.seed}).rho;
    route = "monte_carlo";
  } else if (c.method == "weyl" || c.method == "quadrature") {
    result = channel::apply_channel(rho, noise, quad_of(c.eval));
  } else {
    throw DomainError("channel supports --method quadrature or mc");
  }
  const double trace = result.trace();
  const double min_eig = result.min_eigenvalue();
  Sink sink(c.out_path, out);
  const int dim = result.dim();
  if (c.json) {
    nlohmann::ordered_json j;
    j["state"] = to_string(spec);
    j["gamma"] = rounded(gamma);
    j["route"] = route;
    j["dim"] = dim;
    j["trace"] = rounded(trace);
    j["min_eigenvalue"] = rounded(min_eig);
    j["trace_deficit"] = rounded(result.trace_deficit());
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (int r = 0; r < dim; ++r) {
      nlohmann::ordered_json rr = nlohmann::ordered_json::array();
      nlohmann::ordered_json ri = nlohmann::ordered_json::array();
      for (int k = 0; k < dim; ++k) {
        rr.push_back(rounded(result(r, k).real()));
        ri.push_back(rounded(result(r, k).imag()));
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    j["re"] = re;
    j["im"] = im;
    *sink << j.dump() << '\n';
  } else {
    *sink << "# state=" << to_string(spec) << " gamma=" << format_number(gamma) << " route=" << route
          << " dim=" << dim << '\n';
    *sink << "# trace=" << format_number(trace) << " min_eigenvalue=" << format_number(min_eig)
          << " trace_deficit=" << format_number(result.trace_deficit()) << '\n';
    *sink << "row,col,re,im\n";
    for (int r = 0; r < dim; ++r) {
      for (int k = 0; k < dim; ++k) {
        *sink << r << ',' << k << ',' << format_number(result(r, k).real()) << ','
              << format_number(result(r, k).imag()) << '\n';
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity of bosonic Gaussian displacement channels in truncated Fock space", "gaussfid"};
  app.require_subcommand(1);

  Common c;
  double gamma = 0.0;
  std::optional<double> verify_gamma;
  CurveRequest request;
  std::vector<std::string> suites;
  int trials = 50;

  auto* fid = app.add_subcommand("fidelity", "Channel fidelity of one state at one gamma");
  fid->add_option("--state", c.state, "State spec")->required();
  fid->add_option("--gamma", gamma, "Channel noise gamma >= 0")->required();
  fid->add_option("--method", c.method, "weyl|direct|wigner|a-gamma|closed|purification|mc")->capture_default_str();
  add_eval_flags(*fid, c);

  auto* curve = app.add_subcommand("curve", "Fidelity as a function of gamma, CSV");
  curve->add_option("--state", c.state, "State spec")->required();
  curve->add_option("--gamma-min", request.gamma_min)->capture_default_str();
  curve->add_option("--gamma-max", request.gamma_max)->capture_default_str();
  curve->add_option("--steps", request.steps)->capture_default_str();
  curve->add_option("--method", c.method)->capture_default_str();
  curve->add_option("--out", c.out_path, "Output file (default stdout)");
  add_eval_flags(*curve, c);

  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--suite", suites, "Suite name (repeatable); default all")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--state", c.state, "Restrict suites to one state");
  verify->add_option("--gamma", verify_gamma, "Restrict suites to one gamma");
  verify->add_option("--trials", trials, "Random states for the bound suite")
      ->capture_default_str()
      ->check(CLI::Range(1, 100000));
  add_eval_flags(*verify, c);

  auto* chan = app.add_subcommand("channel", "Dump the output density matrix");
  chan->add_option("--state", c.state, "State spec")->required();
  chan->add_option("--gamma", gamma, "Channel noise gamma >= 0")->required();
  chan->add_option("--method", c.method, "quadrature|mc");
  chan->add_option("--out", c.out_path, "Output file (default stdout)");
  add_eval_flags(*chan, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (fid->parsed()) return cmd_fidelity(c, gamma, out);
    if (curve->parsed()) return cmd_curve(c, request, out);
    if (verify->parsed()) return cmd_verify(c, suites, verify_gamma, trials, out);
    if (chan->parsed()) return cmd_channel(c, gamma, out);
  } catch (const TruncationError& e) {
    err << "truncation error: " << e.what() << " (lost weight " << format_number(e.lost_weight()) << ")\n";
    return kExitAccuracy;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitAccuracy;
  }
  return kExitUsage;
}

}  // namespace gaussfid::cli
