#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <Eigen/Dense>

namespace cvswap::gaussian {

/// Default tolerance for the bona fide condition nu_min >= 1/2 - tol.
inline constexpr double kPhysicalTol = 1e-9;

struct PhysicalityReport {
  bool physical = false;
  /// Smallest symplectic eigenvalue; NaN when V is not positive definite
  /// (the symplectic spectrum is undefined there).
  double min_symplectic_eigenvalue = 0.0;
  bool positive_definite = false;
};

/// Symplectic spectrum of any positive-definite 2n x 2n matrix, ascending.
///
/// With V = L L^T, the antisymmetric matrix L^T Omega L is similar to
/// Omega V; its singular values are the symplectic eigenvalues, each
/// appearing twice. Throws DomainError if V is not positive definite.
Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& v);

/// Symplectic eigenvalues of a physical CM. Throws DomainError when any
/// eigenvalue falls below 1/2 - kPhysicalTol.
Eigen::VectorXd symplectic_eigenvalues(const CovMatrix& v);

PhysicalityReport validate_physical(const CovMatrix& v, double tol = kPhysicalTol);

/// Same, starting from a raw matrix; throws DimensionError on a non-square,
/// odd-dimensional or asymmetric argument.
PhysicalityReport validate_physical(const Eigen::MatrixXd& v, double tol = kPhysicalTol);

/// True when S Omega S^T = Omega to `tol` (max-abs).
bool is_symplectic(const Eigen::MatrixXd& s, double tol = 1e-9);

}  // namespace cvswap::gaussian
