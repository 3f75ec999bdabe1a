#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <Eigen/Dense>

#include <random>

namespace cvswap::swap {

using gaussian::CovMatrix;
using gaussian::ThreeModeState;

/// Homodyne results of the CV Bell measurement on B1, B2:
/// x_- = x_B2 - x_B1 and p_+ = p_B2 + p_B1.
struct BellOutcome {
  double x_minus = 0.0;
  double p_plus = 0.0;
};

/// Refuse M = B1 + Z B2 Z above this condition number.
inline constexpr double kMaxConditionNumber = 1e12;

/// E_N above this value counts as detected entanglement.
inline constexpr double kCertificationThreshold = 1e-12;

/// Conditional state of R1, R2, C1, C2 after the Bell measurement.
struct SwapResult {
  CovMatrix v_out;   ///< 8x8, modes ordered R1, R2, C1, C2
  CovMatrix v_r1r2;  ///< upper-left 4x4 block of v_out
  CovMatrix v_c1c2;  ///< lower-right 4x4 block of v_out
  Eigen::Matrix4d x_block;
  double eta_rr = 0.0;
  double eta_cc = 0.0;
  double en_rr = 0.0;
  double en_cc = 0.0;
  double m_condition = 0.0;  ///< condition number of M
};

/// Conditional CM after measuring x_- and p_+ on B1, B2.
///
/// Gaussian conditioning on y = u_B2 - Z u_B1 with
/// Cov(y) = Z M Z, M = B1 + Z B2 Z, Z = diag(1, -1):
///
///   V_R1R1 = R1 - D1 M^-1 D1^T          V_R1R2 = D1 M^-1 Z D2^T
///   V_R2R2 = R2 - D2 Z M^-1 Z D2^T
///   V_C1C1 = C1 - E1^T M^-1 E1          V_C1C2 = E1^T M^-1 Z E2
///   V_C2C2 = C2 - E2^T Z M^-1 Z E2
///   X = [ F1 - D1 M^-1 E1      D1 M^-1 Z E2         ]
///       [ D2 Z M^-1 E1         F2 - D2 Z M^-1 Z E2  ]
///
/// The result does not depend on the outcome. Throws DomainError for a
/// non-physical input and MeasurementDegenerate
/// when M is singular or its condition number exceeds kMaxConditionNumber.
SwapResult bell_swap(const ThreeModeState& s1, const ThreeModeState& s2);

struct Displacements {
  Eigen::Vector2d d_r1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d d_r2 = Eigen::Vector2d::Zero();
};

/// Conditional first moments of R1 and R2 for a given outcome O:
///   d_R1 = m_R1 - D1 M^-1 Z (O - m_y),  d_R2 = m_R2 + D2 Z M^-1 Z (O - m_y),
/// with m_y = m_B2 - Z m_B1 the mean outcome (zero for zero-mean inputs).
Displacements swap_displacements(const ThreeModeState& s1, const ThreeModeState& s2,
                                 const BellOutcome& outcome);

/// Marginal Gaussian law of (x_-, p_+).
struct OutcomeDistribution {
  Eigen::Matrix2d covariance;
  Eigen::Vector2d mean;

  BellOutcome sample(std::mt19937_64& rng) const;
};

OutcomeDistribution bell_outcome_distribution(const ThreeModeState& s1, const ThreeModeState& s2);

struct EtaPair {
  double eta_rr = 0.0;
  double eta_cc = 0.0;
};

/// Closed-form PPT eigenvalues for identical standard-form sites:
/// eta_RR = mu_B / (2 mu_RB), eta_CC = mu_B / (2 mu_BC).
/// Throws PreconditionError when `s` is not in standard form.
EtaPair eta_closed_form(const ThreeModeState& s);

}  // namespace cvswap::swap
