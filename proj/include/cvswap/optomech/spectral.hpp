#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"
#include "cvswap/optomech/model.hpp"
#include "cvswap/optomech/params.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace cvswap::optomech {

/// h~(omega) = sqrt(2/tau) / (1/tau + i (Omega - omega)), the transform
/// int h(t) e^{i omega t} dt of the causal exponential filter.
std::complex<double> filter_transfer(const FilterSpec& f, double omega);

enum class ThermalNoise {
  kMarkov,    ///< white symmetrized spectrum gamma_m (2 n + 1)
  kBrownian,  ///< gamma_m (omega/omega_m) coth(hbar omega / 2 k_B T), Drude-regularized
};

struct IntegrationConfig {
  double abs_tol = 1e-8;   ///< per CM entry
  double rel_tol = 1e-10;  ///< per CM entry
  std::size_t max_intervals = 20000;
  ThermalNoise noise = ThermalNoise::kMarkov;
  /// Drude cutoff of the Brownian bath, in units of omega_m. The ohmic
  /// spectrum alone makes the momentum variance diverge logarithmically.
  double drude_cutoff = 100.0;
};

struct SpectralDiagnostics {
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
  double max_error = 0.0;  ///< largest per-entry error estimate
  double window = 0.0;     ///< |omega| split between core and tail, units of omega_m
  bool converged = false;
};

/// Intracavity stationary CM as int d omega/2pi T(omega) D T(omega)^dagger
/// with T(omega) = (-i omega I - A)^-1. Throws StabilityError or
/// IntegrationError.
gaussian::CovMatrix spectral_intracavity_cm(const LinearModel& model, const IntegrationConfig& config = {},
                                            SpectralDiagnostics* diagnostics = nullptr);

/// Stationary CM of (dq, dp, x_b^sel, y_b^sel, x_c^sel, y_c^sel): mechanics
/// and the two filtered output modes a_k^sel(t) = int h_k(t - s) a_k^out(s) ds
/// with a_k^out = sqrt(2 kappa_k) da_k - a_k^in, all in the drive frame.
/// The quadratures are (x + i y)/sqrt(2) = a_sel.
///
/// Returned as a ThreeModeState with R = mechanics, B = out_b, C = out_c.
/// Throws StabilityError for an unstable model and IntegrationError when the
/// frequency integral misses its tolerance.
gaussian::ThreeModeState output_cm(const LinearModel& model, const FilterSpec& filter_b, const FilterSpec& filter_c,
                                   const IntegrationConfig& config = {}, SpectralDiagnostics* diagnostics = nullptr);

/// Equal-time commutators -i <[u_i, u_j]> of the same six operators, built
/// from the input commutators ([x_in, y_in] = i, ohmic bath spectrum
/// 2 gamma_m omega / omega_m). Bona fide modes give the symplectic form.
Eigen::MatrixXd output_commutator(const LinearModel& model, const FilterSpec& filter_b, const FilterSpec& filter_c,
                                  const IntegrationConfig& config = {});

}  // namespace cvswap::optomech
