#pragma once

// Random-state generators and independent oracles shared by the unit and
// acceptance tests. Nothing here calls the swap formulas under test.

#include "cvswap/gaussian/cov_matrix.hpp"
#include "cvswap/gaussian/entanglement.hpp"
#include "cvswap/gaussian/standard_form.hpp"
#include "cvswap/gaussian/symplectic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <utility>

namespace cvswap::testing {

/// Physical state drawn directly in the standard-form layout, by rejection.
inline gaussian::ThreeModeState random_standard_form_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> diag(0.5, 3.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (true) {
    gaussian::StandardFormCM f;
    f.r = diag(rng);
    f.b = diag(rng);
    f.c = diag(rng);
    const double rb = std::sqrt(f.r * f.b);
    const double bc = std::sqrt(f.b * f.c);
    const double rc = std::sqrt(f.r * f.c);
    f.d = rb * unit(rng);
    f.d_p = rb * unit(rng);
    f.e = bc * unit(rng);
    f.e_p = bc * unit(rng);
    f.f = 0.5 * rc * unit(rng);
    f.f_p = 0.5 * rc * unit(rng);
    f.f_pp = 0.5 * rc * unit(rng);
    f.f_ppp = 0.5 * rc * unit(rng);
    const gaussian::CovMatrix v = f.to_cov();
    if (gaussian::validate_physical(v, 0.0).physical) return gaussian::ThreeModeState(v);
  }
}

/// Pure three-mode state in standard form with local variances a/2 (a >= 1,
/// triangle-constrained); all correlation blocks diagonal.
inline Eigen::MatrixXd pure_standard_form(double a_r, double a_b, double a_c) {
  auto eps = [](double ai, double aj, double ak) {
    const double m2 = (ai - aj) * (ai - aj);
    const double p2 = (ai + aj) * (ai + aj);
    const double lo = std::sqrt(std::max(0.0, (m2 - (ak - 1) * (ak - 1)) * (m2 - (ak + 1) * (ak + 1))));
    const double hi = std::sqrt(std::max(0.0, (p2 - (ak - 1) * (ak - 1)) * (p2 - (ak + 1) * (ak + 1))));
    const double n = 4.0 * std::sqrt(ai * aj);
    return std::pair{(lo + hi) / n, (lo - hi) / n};
  };
  const auto [d, d_p] = eps(a_r, a_b, a_c);
  const auto [e, e_p] = eps(a_b, a_c, a_r);
  const auto [f, f_ppp] = eps(a_r, a_c, a_b);
  gaussian::StandardFormCM s;
  s.r = 0.5 * a_r;
  s.b = 0.5 * a_b;
  s.c = 0.5 * a_c;
  s.d = 0.5 * d;
  s.d_p = 0.5 * d_p;
  s.e = 0.5 * e;
  s.e_p = 0.5 * e_p;
  s.f = 0.5 * f;
  s.f_ppp = 0.5 * f_ppp;
  return s.to_cov().matrix();
}

/// Mixed standard-form state: a pure state with random local variances a/2
/// (any ordering) plus a random positive noise matrix that keeps the layout.
inline gaussian::ThreeModeState random_mixed_standard_form(std::mt19937_64& rng, double max_noise = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const double a_r = 1.0 + 3.0 * u(rng);
    const double a_b = 1.0 + 3.0 * u(rng);
    const double a_c = 1.0 + 3.0 * u(rng);
    if (std::abs(a_r - a_b) + 1.0 > a_c || a_c > a_r + a_b - 1.0) continue;
    Eigen::MatrixXd v = pure_standard_form(a_r, a_b, a_c);
    const double dr = max_noise * u(rng), db = max_noise * u(rng), dc = max_noise * u(rng);
    const double lim = std::min(dr, dc);
    for (int i = 0; i < 2; ++i) {
      v(i, i) += dr;
      v(2 + i, 2 + i) += db;
      v(4 + i, 4 + i) += dc;
    }
    const double x = lim * (2.0 * u(rng) - 1.0), y = lim * (2.0 * u(rng) - 1.0);
    v(0, 5) += x;
    v(5, 0) += x;
    v(1, 4) += y;
    v(4, 1) += y;
    const gaussian::CovMatrix cm(v);
    if (gaussian::validate_physical(cm, 0.0).physical) return gaussian::ThreeModeState(cm);
  }
}

/// Rejection-sample a certifying state from random_mixed_standard_form.
inline gaussian::ThreeModeState random_certifying_standard_form(std::mt19937_64& rng) {
  while (true) {
    auto s = random_mixed_standard_form(rng);
    if (gaussian::is_certifying(s).certifying) return s;
  }
}

/// Generic Gaussian conditioning of u ~ N(0, sigma) on the linear
/// observation y = K u. Returns (Cov(rest | y), gain G with E[rest | y] = G y)
/// for the coordinates selected by `keep`.
struct Conditioned {
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd gain;
};

inline Conditioned condition_on_observation(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& k,
                                            const Eigen::MatrixXd& keep) {
  const Eigen::MatrixXd s_yy = k * sigma * k.transpose();
  const Eigen::MatrixXd s_ay = keep * sigma * k.transpose();
  const Eigen::MatrixXd s_aa = keep * sigma * keep.transpose();
  const Eigen::MatrixXd gain = s_ay * s_yy.inverse();
  return {s_aa - gain * s_ay.transpose(), gain};
}

/// Joint CM of two sites, modes ordered R1 B1 C1 R2 B2 C2.
inline Eigen::MatrixXd joint_cm(const gaussian::ThreeModeState& s1, const gaussian::ThreeModeState& s2) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(12, 12);
  j.topLeftCorner(6, 6) = s1.cm().matrix();
  j.bottomRightCorner(6, 6) = s2.cm().matrix();
  return j;
}

/// Observation matrix for (x_B2 - x_B1, p_B2 + p_B1) on the joint vector.
inline Eigen::MatrixXd bell_observation() {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 12);
  k(0, 2) = -1.0;
  k(0, 8) = 1.0;
  k(1, 3) = 1.0;
  k(1, 9) = 1.0;
  return k;
}

/// Selector for (R1, R2, C1, C2) from the joint vector.
inline Eigen::MatrixXd remaining_selector() {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(8, 12);
  const int cols[8] = {0, 1, 6, 7, 4, 5, 10, 11};
  for (int i = 0; i < 8; ++i) s(i, cols[i]) = 1.0;
  return s;
}

/// Two-mode PPT eigenvalue by brute force: full symplectic spectrum of the
/// partially transposed matrix (p -> -p on the second mode).
inline double ppt_min_eig_bruteforce(const Eigen::MatrixXd& v) {
  Eigen::MatrixXd t = v;
  t.row(3) *= -1.0;
  t.col(3) *= -1.0;
  // Eigenvalues of i Omega V come in +-nu pairs.
  Eigen::MatrixXd om = gaussian::symplectic_form(2);
  Eigen::EigenSolver<Eigen::MatrixXd> es(om * t);
  double m = 1e300;
  for (int i = 0; i < 4; ++i) m = std::min(m, std::abs(es.eigenvalues()(i).imag()));
  return m;
}

}  // namespace cvswap::testing
