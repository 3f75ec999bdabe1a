#pragma once

#include "cvswap/optomech/params.hpp"

#include <Eigen/Dense>

#include <complex>

namespace cvswap::optomech {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

struct SemiclassicalState {
  std::complex<double> alpha_b;
  std::complex<double> alpha_c;
  double q_s = 0.0;
};

/// alpha_k = E_k / (kappa_k + i Delta_k) with |E_k| = sqrt(2 kappa_k P_k / hbar omega_L,k)
/// and q_s = sum_k G_0k |alpha_k|^2 / omega_m.
SemiclassicalState semiclassical_steady_state(const OmParams& p);

struct Couplings {
  double g0_b = 0.0;  ///< single-photon coupling (omega_k / L) sqrt(hbar / m omega_m)
  double g0_c = 0.0;
  double g_b = 0.0;   ///< sqrt(2) G_0k |alpha_k|
  double g_c = 0.0;
};

Couplings coupling_constants(const OmParams& p);

/// Planck occupancy [exp(hbar omega_m / k_B T) - 1]^{-1}; zero at T = 0.
double thermal_occupancy(const OmParams& p);

/// Linearized fluctuation dynamics u' = A u + n for
/// u = (dq, dp, dx_b, dy_b, dx_c, dy_c):
///
///     A = [  0     w_m   0     0     0     0   ]
///         [ -w_m  -g_m   G_b   0     G_c   0   ]
///         [  0     0    -k_b   D_b   0     0   ]
///         [  G_b   0    -D_b  -k_b   0     0   ]
///         [  0     0     0     0    -k_c   D_c ]
///         [  G_c   0     0     0    -D_c  -k_c ]
///
/// and diffusion D = diag(0, g_m (2 n + 1), k_b, k_b, k_c, k_c).
struct LinearModel {
  Matrix6d drift;
  Matrix6d diffusion;
  Couplings couplings;
  SemiclassicalState steady;
  double n_bar = 0.0;
  double omega_m = 0.0;
  double gamma_m = 0.0;
  double kappa_b = 0.0;
  double kappa_c = 0.0;
  double delta_b = 0.0;
  double delta_c = 0.0;
  double temperature = 0.0;  ///< kept for the frequency-dependent bath
};

LinearModel build_linear_model(const OmParams& p);

/// Model with explicit effective couplings, bypassing the drive amplitudes.
/// Used to probe stability boundaries.
LinearModel build_linear_model(const OmParams& p, double g_b, double g_c);

/// All eigenvalues of A have real part below -1e-9 omega_m.
bool stability_check(const LinearModel& model);

/// Largest real part among the eigenvalues of A.
double max_growth_rate(const LinearModel& model);

struct BareDetuningSolution {
  double delta_b = 0.0;  ///< effective detunings consistent with the bare ones
  double delta_c = 0.0;
  double q_s = 0.0;
  std::size_t iterations = 0;
};

/// Solves Delta_k = Delta0_k - G_0k q_s(Delta) for given bare detunings
/// Delta0_k = omega_k - omega_L,k by damped fixed-point iteration
/// (relaxation 0.5, tolerance 1e-12 relative to omega_m, at most 1e4 steps).
/// Throws NumericError if the iteration does not settle.
BareDetuningSolution solve_effective_detunings(const OmParams& p, double bare_delta_b, double bare_delta_c);

}  // namespace cvswap::optomech
