#include "cvswap/optomech/model.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/optomech/constants.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cvswap::optomech {

namespace {

double laser_frequency(const CavityMode& m) { return kTwoPi * kSpeedOfLight / m.wavelength; }

double drive_rate(const CavityMode& m) {
  return std::sqrt(2.0 * m.kappa * m.power / (kHbar * laser_frequency(m)));
}

double bare_coupling(const OmParams& p, const CavityMode& m) {
  // omega_k ~ omega_L,k: the cavity-laser offset is negligible at optical frequencies.
  return laser_frequency(m) / p.cavity_length * std::sqrt(kHbar / (p.mass * p.mech_freq));
}

std::complex<double> amplitude(const CavityMode& m, double detuning) {
  return drive_rate(m) / std::complex<double>(m.kappa, detuning);
}

}  // namespace

SemiclassicalState semiclassical_steady_state(const OmParams& p) {
  p.validate();
  SemiclassicalState s;
  s.alpha_b = amplitude(p.mode_b, p.mode_b.detuning);
  s.alpha_c = amplitude(p.mode_c, p.mode_c.detuning);
  s.q_s = (bare_coupling(p, p.mode_b) * std::norm(s.alpha_b) + bare_coupling(p, p.mode_c) * std::norm(s.alpha_c)) /
          p.mech_freq;
  return s;
}

Couplings coupling_constants(const OmParams& p) {
  const SemiclassicalState s = semiclassical_steady_state(p);
  Couplings c;
  c.g0_b = bare_coupling(p, p.mode_b);
  c.g0_c = bare_coupling(p, p.mode_c);
  c.g_b = std::sqrt(2.0) * c.g0_b * std::abs(s.alpha_b);
  c.g_c = std::sqrt(2.0) * c.g0_c * std::abs(s.alpha_c);
  return c;
}

double thermal_occupancy(const OmParams& p) {
  if (p.temperature <= 0.0) return 0.0;
  const double x = kHbar * p.mech_freq / (kBoltzmann * p.temperature);
  return 1.0 / std::expm1(x);
}

LinearModel build_linear_model(const OmParams& p, double g_b, double g_c) {
  p.validate();
  LinearModel m;
  m.couplings = coupling_constants(p);
  m.couplings.g_b = g_b;
  m.couplings.g_c = g_c;
  m.steady = semiclassical_steady_state(p);
  m.n_bar = thermal_occupancy(p);
  m.omega_m = p.mech_freq;
  m.gamma_m = p.gamma_m();
  m.kappa_b = p.mode_b.kappa;
  m.kappa_c = p.mode_c.kappa;
  m.delta_b = p.mode_b.detuning;
  m.delta_c = p.mode_c.detuning;
  m.temperature = p.temperature;

  auto& a = m.drift;
  a.setZero();
  a(0, 1) = m.omega_m;
  a(1, 0) = -m.omega_m;
  // The damping enters with a negative sign; +gamma_m would make the bare
  // resonator unstable.
  a(1, 1) = -m.gamma_m;
  a(1, 2) = g_b;
  a(1, 4) = g_c;
  a(2, 2) = -m.kappa_b;
  a(2, 3) = m.delta_b;
  a(3, 0) = g_b;
  a(3, 2) = -m.delta_b;
  a(3, 3) = -m.kappa_b;
  a(4, 4) = -m.kappa_c;
  a(4, 5) = m.delta_c;
  a(5, 0) = g_c;
  a(5, 4) = -m.delta_c;
  a(5, 5) = -m.kappa_c;

  m.diffusion.setZero();
  m.diffusion(1, 1) = m.gamma_m * (2.0 * m.n_bar + 1.0);
  m.diffusion(2, 2) = m.kappa_b;
  m.diffusion(3, 3) = m.kappa_b;
  m.diffusion(4, 4) = m.kappa_c;
  m.diffusion(5, 5) = m.kappa_c;
  return m;
}

LinearModel build_linear_model(const OmParams& p) {
  const Couplings c = coupling_constants(p);
  return build_linear_model(p, c.g_b, c.g_c);
}

double max_growth_rate(const LinearModel& model) {
  const Eigen::EigenSolver<Matrix6d> es(model.drift, false);
  return es.eigenvalues().real().maxCoeff();
}

bool stability_check(const LinearModel& model) { return max_growth_rate(model) < -1e-9 * model.omega_m; }

BareDetuningSolution solve_effective_detunings(const OmParams& p, double bare_delta_b, double bare_delta_c) {
  p.validate();
  const double g0_b = bare_coupling(p, p.mode_b);
  const double g0_c = bare_coupling(p, p.mode_c);
  BareDetuningSolution sol{bare_delta_b, bare_delta_c, 0.0, 0};
  constexpr double kRelax = 0.5;
  constexpr std::size_t kMaxIter = 10000;
  const double tol = 1e-12 * p.mech_freq;
  for (sol.iterations = 1; sol.iterations <= kMaxIter; ++sol.iterations) {
    const double q = (g0_b * std::norm(amplitude(p.mode_b, sol.delta_b)) +
                      g0_c * std::norm(amplitude(p.mode_c, sol.delta_c))) /
                     p.mech_freq;
    const double next_b = (1.0 - kRelax) * sol.delta_b + kRelax * (bare_delta_b - g0_b * q);
    const double next_c = (1.0 - kRelax) * sol.delta_c + kRelax * (bare_delta_c - g0_c * q);
    const double step = std::max(std::abs(next_b - sol.delta_b), std::abs(next_c - sol.delta_c));
    sol.delta_b = next_b;
    sol.delta_c = next_c;
    sol.q_s = q;
    if (step <= tol) return sol;
  }
  throw NumericError(fmt::format("effective-detuning iteration did not converge in {} steps", kMaxIter));
}

}  // namespace cvswap::optomech
