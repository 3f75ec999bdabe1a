#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <array>

namespace cvswap::gaussian {

/// Three-mode standard form: R = rI, B = bI, C = cI, D = diag(d, d'),
/// E = diag(e, e'), F general:
///
///     [ r        d        f    f'   ]
///     [     r        d'   f''  f''' ]
///     [ d        b        e         ]
///     [     d'       b         e'   ]
///     [ f   f''  e        c         ]
///     [ f'  f''' e'            c    ]
struct StandardFormCM {
  double r = 0.5, b = 0.5, c = 0.5;
  double d = 0.0, d_p = 0.0;
  double e = 0.0, e_p = 0.0;
  double f = 0.0, f_p = 0.0, f_pp = 0.0, f_ppp = 0.0;

  CovMatrix to_cov() const;
  ThreeModeState to_state() const { return ThreeModeState(to_cov()); }
};

struct StandardFormResult {
  StandardFormCM form;
  /// Local symplectics for R, B, C; S = S_R (+) S_B (+) S_C maps V to S V S^T.
  std::array<Eigen::Matrix2d, 3> transforms;
  /// Largest off-layout entry of the transformed CM, relative to its scale.
  double residual = 0.0;
};

/// Relative tolerance used for "already in layout" and residual checks.
inline constexpr double kStandardFormTol = 1e-10;

/// Reduce a three-mode state to standard form with local symplectics.
///
/// Each diagonal block is first brought to sqrt(det) I by a local squeezer.
/// Rotations then make D diagonal (SVD) and E diagonal with the rotation
/// left on C. When |d| = |d'| the pair of rotations on R and B that keeps D
/// fixed is used to diagonalize E instead. Blocks already in layout are left
/// untouched, so a standard-form input gives identity transforms.
///
/// Local symplectics leave 9 free parameters, one short of the 10 layout
/// constraints, so a generic CM cannot reach this form. Throws
/// StandardFormUnavailable when a diagonal block, D, or E is singular, or
/// when the rows of E in D's singular frame are not orthogonal.
StandardFormResult standard_form_reduce(const ThreeModeState& s);

/// Which coupling block a partial reduction diagonalizes.
enum class AlignTarget {
  kRemote,         ///< D = diag(d, d'): the R-B correlations
  kCertification,  ///< E = diag(e, e'): the B-C correlations
};

struct AlignedState {
  ThreeModeState state;
  std::array<Eigen::Matrix2d, 3> transforms;  ///< as in StandardFormResult
};

/// Partial reduction that is always available: every diagonal block is made
/// proportional to the identity and one of D, E is diagonalized by rotations.
/// Identical sites aligned on E give eta_CC = mu_B / (2 mu_BC) exactly under
/// bell_swap; aligned on D they give eta_RR = mu_B / (2 mu_RB).
/// Throws StandardFormUnavailable only for a singular diagonal block.
AlignedState align_frame(const ThreeModeState& s, AlignTarget target);

/// Whether `s` already matches the standard-form layout to `tol` (relative).
bool in_standard_form(const ThreeModeState& s, double tol = kStandardFormTol);

/// Local symplectic on one mode of an n-mode CM.
Eigen::MatrixXd local_transform(std::size_t n_modes, std::size_t mode, const Eigen::Matrix2d& s);

}  // namespace cvswap::gaussian
