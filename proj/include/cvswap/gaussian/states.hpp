#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace cvswap::gaussian {

CovMatrix vacuum(std::size_t n_modes);

/// Single-mode thermal state, V = (n_bar + 1/2) I.
CovMatrix thermal(double n_bar);

/// Two-mode squeezed vacuum: blocks a I, a I, c Z with a = cosh(2r)/2,
/// c = sinh(2r)/2.
CovMatrix tmsv(double r);

CovMatrix direct_sum(const CovMatrix& a, const CovMatrix& b);

/// V -> S V S^T; S must be symplectic.
CovMatrix apply_symplectic(const CovMatrix& v, const Eigen::MatrixXd& s);

CovMatrix apply_local_symplectic(const CovMatrix& v, std::size_t mode, const Eigen::Matrix2d& s);

/// Beam splitter of transmissivity t on modes (i, j):
/// x_i -> sqrt(t) x_i + sqrt(1-t) x_j, x_j -> -sqrt(1-t) x_i + sqrt(t) x_j,
/// same for p.
CovMatrix apply_beamsplitter(const CovMatrix& v, std::size_t i, std::size_t j, double t);

Eigen::Matrix2d rotation(double theta);
Eigen::Matrix2d squeezer(double r);

/// Haar-random passive transform times random squeezers times another
/// passive transform (Euler decomposition).
Eigen::MatrixXd random_symplectic(std::size_t n_modes, std::mt19937_64& rng, double max_squeeze = 1.0);

/// S (+_i (n_i + 1/2) I) S^T with S from random_symplectic and n_i uniform in
/// [0, max_thermal). The seed fully determines the result.
CovMatrix random_physical_cm(std::size_t n_modes, std::uint64_t seed, double max_squeeze = 1.0,
                             double max_thermal = 1.0);

}  // namespace cvswap::gaussian
