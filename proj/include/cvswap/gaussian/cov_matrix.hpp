#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace cvswap::gaussian {

/// Variance of a vacuum quadrature. With [x, p] = i the vacuum CM is I/2.
inline constexpr double kVacuumVariance = 0.5;

/// Symmetrized second moments V_ij = <{u_i, u_j}>/2 - <u_i><u_j> of an
/// n-mode bosonic system, quadratures ordered (x1, p1, ..., xn, pn).
///
/// Construction checks the shape and symmetry (relative tolerance 1e-12) and
/// then stores the exactly symmetrized matrix. Physicality is *not* enforced
/// here; use validate_physical() for that.
class CovMatrix {
 public:
  explicit CovMatrix(Eigen::MatrixXd data);

  std::size_t modes() const { return static_cast<std::size_t>(data_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return data_; }

  /// 2x2 block coupling modes i and j.
  Eigen::Matrix2d block(std::size_t i, std::size_t j) const;

  /// Reduced CM of the listed modes, in the order given.
  CovMatrix reduced(std::initializer_list<std::size_t> mode_list) const;
  CovMatrix reduced(const std::vector<std::size_t>& mode_list) const;

  friend bool operator==(const CovMatrix& a, const CovMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

/// Direct sum of n blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Three-mode state with fixed mode roles: remote (R), Bell (B),
/// certification (C). Blocks follow
///
///     V = [ R   D   F ]
///         [ D^T B   E ]
///         [ F^T E^T C ]
class ThreeModeState {
 public:
  explicit ThreeModeState(CovMatrix cm, Eigen::Matrix<double, 6, 1> mean =
                                            Eigen::Matrix<double, 6, 1>::Zero());

  const CovMatrix& cm() const { return cm_; }
  const Eigen::Matrix<double, 6, 1>& mean() const { return mean_; }

  Eigen::Matrix2d R() const { return cm_.block(0, 0); }
  Eigen::Matrix2d B() const { return cm_.block(1, 1); }
  Eigen::Matrix2d C() const { return cm_.block(2, 2); }
  Eigen::Matrix2d D() const { return cm_.block(0, 1); }
  Eigen::Matrix2d E() const { return cm_.block(1, 2); }
  Eigen::Matrix2d F() const { return cm_.block(0, 2); }

  CovMatrix v_rb() const { return cm_.reduced({0, 1}); }
  CovMatrix v_bc() const { return cm_.reduced({1, 2}); }

 private:
  CovMatrix cm_;
  Eigen::Matrix<double, 6, 1> mean_;
};

}  // namespace cvswap::gaussian
