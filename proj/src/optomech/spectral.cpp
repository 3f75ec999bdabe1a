#include "cvswap/optomech/spectral.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/optomech/constants.hpp"
#include "cvswap/optomech/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace cvswap::optomech {

namespace {

using cd = std::complex<double>;
using Matrix6cd = Eigen::Matrix<cd, 6, 6>;
using Matrix2cd = Eigen::Matrix<cd, 2, 2>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
constexpr cd kI{0.0, 1.0};

enum class Target { kIntracavity, kOutput };

// Everything in units of omega_m: frequencies x = omega / omega_m.
struct Problem {
  Target target = Target::kIntracavity;
  Matrix6d a;
  Vector6d gamma_in;  // n = diag(gamma_in) w
  double gamma = 0.0;
  double n_bar = 0.0;
  double theta = 0.0;  // hbar omega_m / 2 k_B T; 0 at T = 0 is handled separately
  bool zero_temperature = false;
  std::array<FilterSpec, 2> filters;  // scaled: tau omega_m, Omega / omega_m
  IntegrationConfig config;

  explicit Problem(const LinearModel& m, const IntegrationConfig& c) : config(c) {
    a = m.drift / m.omega_m;
    gamma = m.gamma_m / m.omega_m;
    n_bar = m.n_bar;
    gamma_in << 1.0, 1.0, std::sqrt(2.0 * m.kappa_b / m.omega_m), std::sqrt(2.0 * m.kappa_b / m.omega_m),
        std::sqrt(2.0 * m.kappa_c / m.omega_m), std::sqrt(2.0 * m.kappa_c / m.omega_m);
    zero_temperature = !(m.temperature > 0.0);
    if (!zero_temperature) theta = kHbar * m.omega_m / (2.0 * kBoltzmann * m.temperature);
  }

  // Symmetrized spectrum of the bath noise xi.
  double thermal_spectrum(double x) const {
    if (config.noise == ThermalNoise::kMarkov) return gamma * (2.0 * n_bar + 1.0);
    const double xd = config.drude_cutoff;
    const double drude = xd * xd / (xd * xd + x * x);
    double x_coth = 0.0;
    if (zero_temperature) {
      x_coth = std::abs(x);
    } else if (std::abs(theta * x) < 1e-8) {
      x_coth = 1.0 / theta;
    } else {
      x_coth = x / std::tanh(theta * x);
    }
    return gamma * x_coth * drude;
  }

  // Maps the input vector w = (0, xi, x_b^in, y_b^in, x_c^in, y_c^in) onto
  // the six target operators at frequency x.
  Matrix6cd transfer(double x) const {
    Matrix6cd m = -a.cast<cd>();
    m.diagonal().array() -= kI * x;
    Matrix6cd phi = m.partialPivLu().inverse();
    for (int j = 0; j < 6; ++j) phi.col(j) *= gamma_in(j);
    if (target == Target::kIntracavity) return phi;
    for (int k = 0; k < 2; ++k) {
      const int r = 2 + 2 * k;
      Eigen::Matrix<cd, 2, 6> out = gamma_in(r) * phi.middleRows<2>(r);
      out(0, r) -= 1.0;
      out(1, r + 1) -= 1.0;
      const cd h = filter_transfer(filters[k], x);
      const cd hb = std::conj(filter_transfer(filters[k], -x));
      const cd gp = 0.5 * (h + hb);
      const cd gm = 0.5 * (h - hb);
      Matrix2cd mix;
      mix << gp, kI * gm, -kI * gm, gp;
      phi.middleRows<2>(r) = mix * out;
    }
    return phi;
  }

  std::vector<double> breakpoints(double& window) const {
    std::vector<double> pts{0.0, 1.0, -1.0};
    double w = std::max(10.0, 10.0 * std::max(gamma_in(2) * gamma_in(2), gamma_in(4) * gamma_in(4)) / 2.0);
    const Eigen::EigenSolver<Matrix6d> es(a, false);
    for (int i = 0; i < 6; ++i) {
      const double im = es.eigenvalues()(i).imag();
      const double re = std::abs(es.eigenvalues()(i).real());
      w = std::max(w, 2.0 * std::abs(im));
      for (const double s : {-1.0, 1.0}) {
        for (const double k : {0.0, -1.0, 1.0, -10.0, 10.0, -100.0, 100.0}) pts.push_back(s * im + k * re);
      }
    }
    // Detunings appear as the cavity eigenfrequencies at G = 0.
    for (const double d : {a(2, 3), a(4, 5)}) {
      pts.push_back(d);
      pts.push_back(-d);
      w = std::max(w, 2.0 * std::abs(d));
    }
    if (target == Target::kOutput) {
      for (const auto& f : filters) {
        w = std::max({w, 20.0 / f.tau, 2.0 * std::abs(f.omega_c) + 20.0 / f.tau});
        for (const double s : {-1.0, 1.0}) {
          for (const double k : {0.0, -1.0, 1.0, -10.0, 10.0}) pts.push_back(s * f.omega_c + k / f.tau);
        }
      }
    }
    window = w;
    return pts;
  }
};

constexpr std::size_t kSymEntries = 21;   // upper triangle with diagonal
constexpr std::size_t kAntiEntries = 15;  // strict upper triangle

struct Integrated {
  Eigen::VectorXd value;
  SpectralDiagnostics diag;
};

// Integrates g over the real line: [-W, W] directly, |x| > W through x = W/s.
Integrated integrate_line(const Problem& p, const VectorIntegrand& g, std::size_t dim) {
  double window = 0.0;
  const std::vector<double> pts = p.breakpoints(window);

  QuadratureOptions opts;
  opts.abs_tol = 0.5 * p.config.abs_tol;
  opts.rel_tol = p.config.rel_tol;
  opts.max_intervals = p.config.max_intervals;
  const QuadratureResult core = integrate_adaptive(g, dim, -window, window, pts, opts);

  const VectorIntegrand tail = [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
    Eigen::VectorXd lo(static_cast<Eigen::Index>(dim));
    const double x = window / s;
    g(x, out);
    g(-x, lo);
    out = (out + lo) * (window / (s * s));
  };
  const QuadratureResult outer = integrate_adaptive(tail, dim, 0.0, 1.0, {0.01, 0.1, 0.5}, opts);

  Integrated r;
  r.value = core.value + outer.value;
  r.diag.intervals = core.intervals + outer.intervals;
  r.diag.evaluations = core.evaluations + outer.evaluations;
  r.diag.max_error = (core.error + outer.error).maxCoeff();
  r.diag.window = window;
  r.diag.converged = core.converged && outer.converged;
  if (!r.diag.converged) {
    throw IntegrationError(fmt::format(
        "frequency integral not converged: max error {:.3g} (abs tol {:.3g}) after {} intervals, "
        "{} evaluations, window {:.6g} omega_m",
        r.diag.max_error, p.config.abs_tol, r.diag.intervals, r.diag.evaluations, window));
  }
  return r;
}

Eigen::MatrixXd symmetric_cm(const Problem& p, SpectralDiagnostics* diagnostics) {
  const VectorIntegrand g = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
    const Matrix6cd phi = p.transfer(x);
    Vector6d n;
    n << 0.0, p.thermal_spectrum(x), 0.5, 0.5, 0.5, 0.5;
    const Matrix6cd s = phi * n.asDiagonal() * phi.adjoint();
    Eigen::Index k = 0;
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j) out(k++) = kInvTwoPi * s(i, j).real();
    }
  };
  const Integrated r = integrate_line(p, g, kSymEntries);
  if (diagnostics != nullptr) *diagnostics = r.diag;
  Eigen::MatrixXd v(6, 6);
  Eigen::Index k = 0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      v(i, j) = r.value(k);
      v(j, i) = r.value(k);
      ++k;
    }
  }
  return v;
}

void require_stable(const LinearModel& model) {
  if (!stability_check(model)) {
    throw StabilityError(fmt::format("unstable: largest eigenvalue real part {:.6g} omega_m",
                                     max_growth_rate(model) / model.omega_m));
  }
}

Problem output_problem(const LinearModel& model, const FilterSpec& fb, const FilterSpec& fc,
                       const IntegrationConfig& config) {
  fb.validate();
  fc.validate();
  require_stable(model);
  Problem p(model, config);
  p.target = Target::kOutput;
  p.filters = {FilterSpec{fb.tau * model.omega_m, fb.omega_c / model.omega_m},
               FilterSpec{fc.tau * model.omega_m, fc.omega_c / model.omega_m}};
  return p;
}

}  // namespace

std::complex<double> filter_transfer(const FilterSpec& f, double omega) {
  return std::sqrt(2.0 / f.tau) / cd(1.0 / f.tau, f.omega_c - omega);
}

gaussian::CovMatrix spectral_intracavity_cm(const LinearModel& model, const IntegrationConfig& config,
                                            SpectralDiagnostics* diagnostics) {
  require_stable(model);
  Problem p(model, config);
  return gaussian::CovMatrix(symmetric_cm(p, diagnostics));
}

gaussian::ThreeModeState output_cm(const LinearModel& model, const FilterSpec& filter_b, const FilterSpec& filter_c,
                                   const IntegrationConfig& config, SpectralDiagnostics* diagnostics) {
  const Problem p = output_problem(model, filter_b, filter_c, config);
  return gaussian::ThreeModeState(gaussian::CovMatrix(symmetric_cm(p, diagnostics)));
}

Eigen::MatrixXd output_commutator(const LinearModel& model, const FilterSpec& filter_b, const FilterSpec& filter_c,
                                  const IntegrationConfig& config) {
  const Problem p = output_problem(model, filter_b, filter_c, config);
  const VectorIntegrand g = [&](double x, Eigen::Ref<Eigen::VectorXd> out) {
    const Matrix6cd phi = p.transfer(x);
    Matrix6cd c = Matrix6cd::Zero();
    c(1, 1) = 2.0 * p.gamma * x;
    for (int r : {2, 4}) {
      c(r, r + 1) = kI;
      c(r + 1, r) = -kI;
    }
    const Matrix6cd s = phi * c * phi.adjoint();
    Eigen::Index k = 0;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) out(k++) = kInvTwoPi * s(i, j).imag();
    }
  };
  const Integrated r = integrate_line(p, g, kAntiEntries);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
  Eigen::Index k = 0;
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      w(i, j) = r.value(k);
      w(j, i) = -r.value(k);
      ++k;
    }
  }
  return w;
}

}  // namespace cvswap::optomech
