#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"
#include "cvswap/optomech/model.hpp"

#include <Eigen/Dense>

namespace cvswap::optomech {

/// Solves A V + V A^T = -D through the Kronecker form
/// (I (x) A + A (x) I) vec V = -vec D, with one step of iterative refinement.
/// Throws NumericError when the linear system is singular.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d);

/// Stationary CM of (dq, dp, dx_b, dy_b, dx_c, dy_c).
/// Throws StabilityError for an unstable drift matrix.
gaussian::CovMatrix intracavity_steady_cm(const LinearModel& model);

}  // namespace cvswap::optomech
