#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace cvswap::optomech {

/// One driven cavity mode. SI units; rates in rad/s.
struct CavityMode {
  double wavelength = 810e-9;  ///< drive wavelength, m
  double power = 0.0;          ///< input power, W
  double kappa = 0.0;          ///< loss rate through the input port
  double detuning = 0.0;       ///< effective detuning, signed
};

/// One optomechanical site: a mechanical resonator coupled to cavity modes
/// b (Bell) and c (certification).
struct OmParams {
  double cavity_length = 1e-3;   ///< m
  double mech_freq = 0.0;        ///< omega_m, rad/s
  double quality_factor = 1e6;   ///< gamma_m = omega_m / Q_m
  double mass = 0.0;             ///< kg
  double temperature = 0.0;      ///< K
  CavityMode mode_b;
  CavityMode mode_c;

  double gamma_m() const { return mech_freq / quality_factor; }

  /// Throws DomainError on a non-positive length, frequency, mass,
  /// wavelength or loss rate, a negative power or temperature, or Q_m < 1.
  void validate() const;
};

/// Causal exponential filter h(t) = sqrt(2/tau) Theta(t) exp[-(1/tau + i Omega) t].
struct FilterSpec {
  double tau = 0.0;      ///< inverse bandwidth, s
  double omega_c = 0.0;  ///< central frequency relative to the drive, rad/s

  void validate() const;
};

/// Site used for the remote-entanglement contour: L = 1 mm, omega_m/2pi =
/// 10 MHz, Q_m = 1e6, m = 10 ng, T = 0.1 K, lambda = 810 nm,
/// P_b = 4.5 mW, P_c = 5.0 mW, kappa = omega_m, Delta_c = -Delta_b = omega_m.
OmParams reference_params();

/// Filters paired with reference_params(): Omega_b = -omega_m, Omega_c = omega_m,
/// tau_c = tau_b / 5.
struct FilterPair {
  FilterSpec b;
  FilterSpec c;
};
FilterPair reference_filters(double omega_m, double tau_b_omega_m);

nlohmann::json to_json(const OmParams& p);
nlohmann::json to_json(const FilterSpec& f);

/// Reads every OmParams field by name; fields absent from `j` keep the
/// values of `base`. Throws SchemaError on wrong types or unknown fields.
OmParams params_from_json(const nlohmann::json& j, const OmParams& base = reference_params());
FilterSpec filter_from_json(const nlohmann::json& j, const FilterSpec& base = {});

/// Apply "path=value" with a dotted field path, e.g. "mode_b.power=5e-3".
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace cvswap::optomech
