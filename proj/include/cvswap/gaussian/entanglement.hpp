#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <cstddef>

namespace cvswap::gaussian {

/// Flip the sign of p on `mode` (partial transposition in phase space).
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, std::size_t mode);

/// Smallest symplectic eigenvalue of the partially transposed two-mode CM.
///
/// Uses the local symplectic invariants: with V = [[A, C], [C^T, B]] and
/// Delta~ = det A + det B - 2 det C,
///     eta^2 = 2 det V / (Delta~ + sqrt(Delta~^2 - 4 det V)).
/// The result does not depend on which mode is transposed.
double ppt_min_eig(const CovMatrix& v, std::size_t transposed_mode = 1);

/// max{0, -ln(2 eta)}.
double log_negativity_from_eta(double eta);

double log_negativity(const CovMatrix& v);

/// Tr rho^2 = [2^n sqrt(det V)]^{-1}. Throws NumericError if det V <= 0.
double purity(const CovMatrix& v);

struct PurityTriple {
  double mu_rb = 0.0;
  double mu_bc = 0.0;
  double mu_b = 0.0;
  double mu_c = 0.0;
};

PurityTriple purities(const ThreeModeState& s);

inline constexpr double kCertifyingTol = 1e-12;

struct CertifyingReport {
  bool certifying = false;
  double margin_rb_bc = 0.0;  ///< mu_RB - mu_BC
  double margin_bc_b = 0.0;   ///< mu_BC - mu_B
  PurityTriple purities;
};

/// mu_RB > mu_BC > mu_B, both margins strictly above kCertifyingTol.
CertifyingReport is_certifying(const ThreeModeState& s);

/// Lower bound on mu_BC above which the two-mode state BC must be entangled,
/// given its local purities: mu_B mu_C / sqrt(mu_B^2 + mu_C^2 - mu_B^2 mu_C^2).
double entangling_purity_bound(double mu_b, double mu_c);

}  // namespace cvswap::gaussian
