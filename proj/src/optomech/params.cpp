#include "cvswap/optomech/params.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/optomech/constants.hpp"

#include <fmt/format.h>

#include <cmath>
#include <set>

namespace cvswap::optomech {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("{} must be positive and finite, got {}", name, x));
  }
}

void require_non_negative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("{} must be non-negative and finite, got {}", name, x));
  }
}

void read_number(const nlohmann::json& j, const std::string& key, const std::string& path, double& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number()) throw SchemaError(fmt::format("field '{}{}' must be a number", path, key));
  out = it->get<double>();
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.contains(key)) throw SchemaError(fmt::format("unknown field '{}{}'", path, key));
  }
}

CavityMode mode_from_json(const nlohmann::json& j, const std::string& path, CavityMode m) {
  if (!j.is_object()) throw SchemaError(fmt::format("field '{}' must be an object", path));
  reject_unknown(j, {"wavelength", "power", "kappa", "detuning"}, path + ".");
  read_number(j, "wavelength", path + ".", m.wavelength);
  read_number(j, "power", path + ".", m.power);
  read_number(j, "kappa", path + ".", m.kappa);
  read_number(j, "detuning", path + ".", m.detuning);
  return m;
}

nlohmann::json mode_to_json(const CavityMode& m) {
  return {{"wavelength", m.wavelength}, {"power", m.power}, {"kappa", m.kappa}, {"detuning", m.detuning}};
}

}  // namespace

void OmParams::validate() const {
  require_positive(cavity_length, "cavity_length");
  require_positive(mech_freq, "mech_freq");
  require_positive(mass, "mass");
  require_non_negative(temperature, "temperature");
  if (!(quality_factor >= 1.0)) throw DomainError(fmt::format("quality_factor must be >= 1, got {}", quality_factor));
  for (const auto& [m, name] : {std::pair{&mode_b, "mode_b"}, std::pair{&mode_c, "mode_c"}}) {
    require_positive(m->wavelength, fmt::format("{}.wavelength", name).c_str());
    require_non_negative(m->power, fmt::format("{}.power", name).c_str());
    require_positive(m->kappa, fmt::format("{}.kappa", name).c_str());
    if (!std::isfinite(m->detuning)) throw DomainError(fmt::format("{}.detuning must be finite", name));
  }
}

void FilterSpec::validate() const {
  require_positive(tau, "filter tau");
  if (!std::isfinite(omega_c)) throw DomainError("filter omega_c must be finite");
}

OmParams reference_params() {
  OmParams p;
  p.cavity_length = 1e-3;
  p.mech_freq = kTwoPi * 10e6;
  p.quality_factor = 1e6;
  p.mass = 10e-12;
  p.temperature = 0.1;
  p.mode_b = {810e-9, 4.5e-3, p.mech_freq, -p.mech_freq};
  p.mode_c = {810e-9, 5.0e-3, p.mech_freq, p.mech_freq};
  return p;
}

FilterPair reference_filters(double omega_m, double tau_b_omega_m) {
  const double tau_b = tau_b_omega_m / omega_m;
  return {{tau_b, -omega_m}, {tau_b / 5.0, omega_m}};
}

nlohmann::json to_json(const OmParams& p) {
  return {{"cavity_length", p.cavity_length},
          {"mech_freq", p.mech_freq},
          {"quality_factor", p.quality_factor},
          {"mass", p.mass},
          {"temperature", p.temperature},
          {"mode_b", mode_to_json(p.mode_b)},
          {"mode_c", mode_to_json(p.mode_c)}};
}

nlohmann::json to_json(const FilterSpec& f) { return {{"tau", f.tau}, {"omega_c", f.omega_c}}; }

OmParams params_from_json(const nlohmann::json& j, const OmParams& base) {
  if (!j.is_object()) throw SchemaError("parameter file must hold a JSON object");
  // filter_b / filter_c may share the file; they are read by filter_from_json.
  reject_unknown(j,
                 {"cavity_length", "mech_freq", "quality_factor", "mass", "temperature", "mode_b", "mode_c",
                  "filter_b", "filter_c"},
                 "");
  OmParams p = base;
  read_number(j, "cavity_length", "", p.cavity_length);
  read_number(j, "mech_freq", "", p.mech_freq);
  read_number(j, "quality_factor", "", p.quality_factor);
  read_number(j, "mass", "", p.mass);
  read_number(j, "temperature", "", p.temperature);
  if (const auto it = j.find("mode_b"); it != j.end()) p.mode_b = mode_from_json(*it, "mode_b", p.mode_b);
  if (const auto it = j.find("mode_c"); it != j.end()) p.mode_c = mode_from_json(*it, "mode_c", p.mode_c);
  return p;
}

FilterSpec filter_from_json(const nlohmann::json& j, const FilterSpec& base) {
  if (!j.is_object()) throw SchemaError("filter must be a JSON object");
  reject_unknown(j, {"tau", "omega_c"}, "filter.");
  FilterSpec f = base;
  read_number(j, "tau", "filter.", f.tau);
  read_number(j, "omega_c", "filter.", f.omega_c);
  return f;
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SchemaError(fmt::format("override '{}' must look like field=value", assignment));
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw SchemaError(fmt::format("override '{}': value '{}' is not a number", path, text));
  }
  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw SchemaError(fmt::format("override '{}' has an empty field name", path));
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace cvswap::optomech
