// Command-line driver: file-level wrappers over the Gaussian and swap
// libraries, the optomechanical pipeline, and parameter sweeps.
//
// Exit codes: 0 ok, 1 non-physical CM, 2 instability / non-convergence /
// degenerate numerics, 3 malformed input (schema, bad flags, unreadable file).

#include "cvswap/errors.hpp"
#include "cvswap/experiments/pipeline.hpp"
#include "cvswap/experiments/sweep.hpp"
#include "cvswap/gaussian/entanglement.hpp"
#include "cvswap/gaussian/io.hpp"
#include "cvswap/gaussian/symplectic.hpp"
#include "cvswap/optomech/params.hpp"
#include "cvswap/swap/protocol.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cvswap;

enum Exit : int { kOk = 0, kPhysicality = 1, kNumeric = 2, kSchema = 3 };

// Non-physical input CM; carries its own exit code.
class PhysicalityFailure : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", c.out));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", c.out));
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void require_physical(const gaussian::CovMatrix& v, const std::string& what) {
  const auto rep = gaussian::validate_physical(v);
  if (!rep.physical) {
    throw PhysicalityFailure(fmt::format("{} is not a physical CM (min symplectic eigenvalue {})", what,
                                         gaussian::format_double(rep.min_symplectic_eigenvalue)));
  }
}

// Parameter file plus --set overrides, as raw JSON.
nlohmann::json load_params_json(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json j = path.empty() ? optomech::to_json(optomech::reference_params()) : read_json(path);
  for (const auto& o : overrides) optomech::apply_override(j, o);
  return j;
}

// Parameter-range problems are input errors, not physics failures.
template <class F>
auto as_schema(F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw SchemaError(fmt::format("invalid parameter: {}", e.what()));
  }
}

optomech::IntegrationConfig integration_config(const std::string& noise, double abs_tol) {
  optomech::IntegrationConfig cfg;
  if (noise == "markov") {
    cfg.noise = optomech::ThermalNoise::kMarkov;
  } else if (noise == "brownian") {
    cfg.noise = optomech::ThermalNoise::kBrownian;
  } else {
    throw SchemaError(fmt::format("--noise must be 'markov' or 'brownian', got '{}'", noise));
  }
  cfg.abs_tol = abs_tol;
  return cfg;
}

int cmd_validate(const Common& c, const std::string& file) {
  const gaussian::CovMatrix v = gaussian::cm_from_json(read_json(file));
  const auto rep = gaussian::validate_physical(v);
  nlohmann::json j{{"file", file},
                   {"n_modes", v.modes()},
                   {"physical", rep.physical},
                   {"positive_definite", rep.positive_definite},
                   {"min_symplectic_eigenvalue", rep.min_symplectic_eigenvalue}};
  if (rep.positive_definite) j["purity"] = gaussian::purity(v);
  emit(c, dump(j));
  return rep.physical ? kOk : kPhysicality;
}

int cmd_certify(const Common& c, const std::string& file) {
  const gaussian::ThreeModeState s = gaussian::state_from_json(read_json(file));
  require_physical(s.cm(), file);
  const auto rep = gaussian::is_certifying(s);
  const auto& p = rep.purities;
  const nlohmann::json j{
      {"file", file},
      {"certifying", rep.certifying},
      {"purities", {{"rb", p.mu_rb}, {"bc", p.mu_bc}, {"b", p.mu_b}, {"c", p.mu_c}}},
      {"margins", {{"rb_bc", rep.margin_rb_bc}, {"bc_b", rep.margin_bc_b}}},
      {"en", {{"rb", gaussian::log_negativity(s.v_rb())}, {"bc", gaussian::log_negativity(s.v_bc())}}}};
  emit(c, dump(j));
  return kOk;
}

int cmd_swap(const Common& c, const std::string& f1, const std::string& f2, std::size_t rounds) {
  const gaussian::ThreeModeState s1 = gaussian::state_from_json(read_json(f1));
  const gaussian::ThreeModeState s2 = gaussian::state_from_json(read_json(f2));
  require_physical(s1.cm(), f1);
  require_physical(s2.cm(), f2);
  const swap::ProtocolRun run = swap::run_protocol(s1, s2, rounds, c.seed);
  if (c.format == "csv") {
    emit(c, swap::protocol_csv(run.rounds));
    return kOk;
  }
  nlohmann::json j = swap::to_json(run.swap);
  const auto dist = swap::bell_outcome_distribution(s1, s2);
  j["outcome_covariance"] = {{dist.covariance(0, 0), dist.covariance(0, 1)},
                             {dist.covariance(1, 0), dist.covariance(1, 1)}};
  j["certified"] = run.certified;
  j["seed"] = c.seed;
  j["rounds"] = nlohmann::json::array();
  for (const auto& r : run.rounds) {
    j["rounds"].push_back({{"round", r.round},
                           {"x_minus", r.outcome.x_minus},
                           {"p_plus", r.outcome.p_plus},
                           {"d_r1", {r.d_r1(0), r.d_r1(1)}},
                           {"d_r2", {r.d_r2(0), r.d_r2(1)}},
                           {"certified", r.certified}});
  }
  emit(c, dump(j));
  return kOk;
}

struct PipelineArgs {
  std::string params;
  std::vector<std::string> overrides;
  double tau_b = 10.0;
  std::string frame = "certification";
  std::string noise = "markov";
  double abs_tol = 1e-8;
  std::size_t rounds = 10;
};

int cmd_pipeline(const Common& c, const PipelineArgs& a) {
  const nlohmann::json pj = load_params_json(a.params, a.overrides);
  const optomech::OmParams params = as_schema([&] {
    auto p = optomech::params_from_json(pj);
    p.validate();
    return p;
  });
  const optomech::FilterPair defaults = optomech::reference_filters(params.mech_freq, a.tau_b);
  const optomech::FilterSpec fb = as_schema([&] {
    auto f = pj.contains("filter_b") ? optomech::filter_from_json(pj["filter_b"], defaults.b) : defaults.b;
    f.validate();
    return f;
  });
  const optomech::FilterSpec fc = as_schema([&] {
    auto f = pj.contains("filter_c") ? optomech::filter_from_json(pj["filter_c"], defaults.c) : defaults.c;
    f.validate();
    return f;
  });
  experiments::PipelineOptions opts;
  opts.integration = integration_config(a.noise, a.abs_tol);
  opts.frame = experiments::bell_frame_from_string(a.frame);
  opts.rounds = a.rounds;
  opts.seed = c.seed;
  const nlohmann::json report = experiments::run_pipeline(params, fb, fc, opts);
  if (c.format == "csv") {
    std::vector<swap::ProtocolRecord> recs;
    for (const auto& r : report["protocol"]["rounds"]) {
      swap::ProtocolRecord rec;
      rec.round = r["round"].get<std::size_t>();
      rec.outcome = {r["x_minus"].get<double>(), r["p_plus"].get<double>()};
      rec.d_r1 = {r["d_r1"][0].get<double>(), r["d_r1"][1].get<double>()};
      rec.d_r2 = {r["d_r2"][0].get<double>(), r["d_r2"][1].get<double>()};
      rec.certified = r["certified"].get<bool>();
      recs.push_back(rec);
    }
    emit(c, swap::protocol_csv(recs));
  } else {
    emit(c, dump(report));
  }
  return kOk;
}

struct SweepArgs {
  std::string params;
  std::string grid;
  std::vector<std::string> overrides;
  std::string frame = "certification";
  std::string noise = "markov";
  double abs_tol = 1e-8;
  unsigned threads = 1;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  experiments::SweepSpec spec;
  spec.base = as_schema([&] {
    auto p = optomech::params_from_json(load_params_json(a.params, a.overrides));
    p.validate();
    return p;
  });
  if (!a.grid.empty()) spec = experiments::grid_from_json(read_json(a.grid), spec);
  as_schema([&] {
    spec.validate();
    return 0;
  });
  spec.options.integration = integration_config(a.noise, a.abs_tol);
  spec.options.frame = experiments::bell_frame_from_string(a.frame);
  spec.options.seed = c.seed;
  spec.threads = a.threads;

  if (c.format == "csv" && !c.out.empty()) {
    const std::size_t computed = experiments::sweep_to_csv(spec, c.out);
    std::cerr << fmt::format("sweep: {} rows computed, {} reused\n", computed,
                             spec.tau.points * spec.kappa.points - computed);
    return kOk;
  }
  const auto rows = experiments::run_sweep(spec);
  if (c.format == "csv") {
    std::string text = std::string(experiments::kSweepCsvHeader) + "\n";
    for (const auto& r : rows) text += experiments::csv_line(r) + "\n";
    emit(c, text);
  } else {
    nlohmann::json j{{"grid", experiments::to_json(spec)},
                     {"params", optomech::to_json(spec.base)},
                     {"frame", a.frame},
                     {"rows", nlohmann::json::array()}};
    for (const auto& r : rows) j["rows"].push_back(experiments::to_json(r));
    emit(c, dump(j));
  }
  return kOk;
}

int fail(int code, const char* kind, const std::string& message) {
  std::cout << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  std::cerr << "error: " << message << "\n";
  return code;
}

void add_common(CLI::App* sub, Common& c, bool with_format) {
  sub->add_option("--out", c.out, "Output file (default: stdout)");
  sub->add_option("--seed", c.seed, "Top-level random seed");
  if (with_format) sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable entanglement swapping with optomechanical sites"};
  app.require_subcommand(1);

  Common common;
  std::string cm_file;
  std::string state1;
  std::string state2;
  std::size_t swap_rounds = 10;
  PipelineArgs pargs;
  SweepArgs sargs;

  auto* validate = app.add_subcommand("validate", "Check that a CM file describes a physical state");
  validate->add_option("cm", cm_file, "CM JSON file")->required();
  add_common(validate, common, false);

  auto* certify = app.add_subcommand("certify", "Purity test of a three-mode state (mu_RB > mu_BC > mu_B)");
  certify->add_option("state", cm_file, "Three-mode state JSON file")->required();
  add_common(certify, common, false);

  auto* swap_cmd = app.add_subcommand("swap", "Bell measurement on the B modes of two three-mode states");
  swap_cmd->add_option("state1", state1, "Site 1 state JSON")->required();
  swap_cmd->add_option("state2", state2, "Site 2 state JSON")->required();
  swap_cmd->add_option("--rounds", swap_rounds, "Protocol rounds to sample");
  add_common(swap_cmd, common, true);

  auto* pipeline = app.add_subcommand("pipeline", "Optomechanical site -> certification -> swap -> protocol");
  pipeline->add_option("--params", pargs.params, "Parameter JSON (default: built-in reference site)");
  pipeline->add_option("--set", pargs.overrides, "Override a parameter, e.g. mode_b.power=4e-3");
  pipeline->add_option("--tau-b", pargs.tau_b, "tau_b * omega_m for the default filters")->check(CLI::PositiveNumber);
  pipeline->add_option("--frame", pargs.frame, "Bell-mode frame")->check(CLI::IsMember({"certification", "drive"}));
  pipeline->add_option("--noise", pargs.noise, "Thermal bath model")->check(CLI::IsMember({"markov", "brownian"}));
  pipeline->add_option("--abs-tol", pargs.abs_tol, "Frequency-integral tolerance per CM entry")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--rounds", pargs.rounds, "Protocol rounds to sample");
  add_common(pipeline, common, true);

  auto* sweep = app.add_subcommand("sweep", "E_N over the (tau_b omega_m, kappa / omega_m) grid");
  sweep->add_option("--params", sargs.params, "Parameter JSON (default: built-in reference site)");
  sweep->add_option("--grid", sargs.grid, "Grid JSON (default: 40 x 30 points)");
  sweep->add_option("--set", sargs.overrides, "Override a parameter, e.g. temperature=1");
  sweep->add_option("--frame", sargs.frame, "Bell-mode frame")->check(CLI::IsMember({"certification", "drive"}));
  sweep->add_option("--noise", sargs.noise, "Thermal bath model")->check(CLI::IsMember({"markov", "brownian"}));
  sweep->add_option("--abs-tol", sargs.abs_tol, "Frequency-integral tolerance per CM entry")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sargs.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_common(sweep, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchema;
  }
  if (sweep->parsed()) common.format = common.format == "json" && !sweep->count("--format") ? "csv" : common.format;

  try {
    if (validate->parsed()) return cmd_validate(common, cm_file);
    if (certify->parsed()) return cmd_certify(common, cm_file);
    if (swap_cmd->parsed()) return cmd_swap(common, state1, state2, swap_rounds);
    if (pipeline->parsed()) return cmd_pipeline(common, pargs);
    if (sweep->parsed()) return cmd_sweep(common, sargs);
  } catch (const PhysicalityFailure& e) {
    return fail(kPhysicality, "physicality", e.what());
  } catch (const StabilityError& e) {
    return fail(kNumeric, "unstable", e.what());
  } catch (const IntegrationError& e) {
    return fail(kNumeric, "integration", e.what());
  } catch (const MeasurementDegenerate& e) {
    return fail(kNumeric, "measurement_degenerate", e.what());
  } catch (const SchemaError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const IoError& e) {
    return fail(kSchema, "io", e.what());
  } catch (const DomainError& e) {
    return fail(kPhysicality, "physicality", e.what());
  } catch (const Error& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kSchema, "schema", e.what());
  }
  return kOk;
}
