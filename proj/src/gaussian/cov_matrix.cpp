#include "cvswap/gaussian/cov_matrix.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cvswap::gaussian {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

CovMatrix::CovMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) {
    throw DimensionError(
        fmt::format("covariance matrix must be square, got {}x{}", data_.rows(), data_.cols()));
  }
  if (data_.rows() == 0 || data_.rows() % 2 != 0) {
    throw DimensionError(
        fmt::format("covariance matrix dimension must be even and positive, got {}", data_.rows()));
  }
  if (!data_.allFinite()) {
    throw DomainError("covariance matrix has non-finite entries");
  }
  const double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
  const double asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw DimensionError(fmt::format("covariance matrix is not symmetric (max |V - V^T| = {:.3e})", asym));
  }
  data_ = 0.5 * (data_ + data_.transpose()).eval();
}

Eigen::Matrix2d CovMatrix::block(std::size_t i, std::size_t j) const {
  if (i >= modes() || j >= modes()) {
    throw DimensionError(fmt::format("mode index ({}, {}) out of range for {} modes", i, j, modes()));
  }
  return data_.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j));
}

CovMatrix CovMatrix::reduced(std::initializer_list<std::size_t> mode_list) const {
  return reduced(std::vector<std::size_t>(mode_list));
}

CovMatrix CovMatrix::reduced(const std::vector<std::size_t>& mode_list) const {
  const auto k = static_cast<Eigen::Index>(mode_list.size());
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out.block<2, 2>(2 * a, 2 * b) = block(mode_list[static_cast<std::size_t>(a)],
                                            mode_list[static_cast<std::size_t>(b)]);
    }
  }
  return CovMatrix(std::move(out));
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

ThreeModeState::ThreeModeState(CovMatrix cm, Eigen::Matrix<double, 6, 1> mean)
    : cm_(std::move(cm)), mean_(std::move(mean)) {
  if (cm_.modes() != 3) {
    throw DimensionError(fmt::format("three-mode state needs a 6x6 CM, got {} modes", cm_.modes()));
  }
}

}  // namespace cvswap::gaussian
