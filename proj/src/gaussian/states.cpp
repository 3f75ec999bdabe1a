#include "cvswap/gaussian/states.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/gaussian/symplectic.hpp"

#include <fmt/format.h>

#include <cmath>
#include <complex>

namespace cvswap::gaussian {

CovMatrix vacuum(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(2 * n_modes);
  return CovMatrix(kVacuumVariance * Eigen::MatrixXd::Identity(n, n));
}

CovMatrix thermal(double n_bar) {
  if (!(n_bar >= 0.0)) throw DomainError(fmt::format("thermal occupancy must be >= 0, got {}", n_bar));
  return CovMatrix((n_bar + kVacuumVariance) * Eigen::MatrixXd::Identity(2, 2));
}

CovMatrix tmsv(double r) {
  const double a = std::cosh(2.0 * r) / 2.0;
  const double c = std::sinh(2.0 * r) / 2.0;
  Eigen::MatrixXd v(4, 4);
  // clang-format off
  v << a,   0.0, c,   0.0,
       0.0, a,   0.0, -c,
       c,   0.0, a,   0.0,
       0.0, -c,  0.0, a;
  // clang-format on
  return CovMatrix(std::move(v));
}

CovMatrix direct_sum(const CovMatrix& a, const CovMatrix& b) {
  const auto na = a.matrix().rows();
  const auto nb = b.matrix().rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(na + nb, na + nb);
  v.topLeftCorner(na, na) = a.matrix();
  v.bottomRightCorner(nb, nb) = b.matrix();
  return CovMatrix(std::move(v));
}

CovMatrix apply_symplectic(const CovMatrix& v, const Eigen::MatrixXd& s) {
  if (s.rows() != v.matrix().rows() || s.cols() != v.matrix().cols()) {
    throw DimensionError(fmt::format("symplectic is {}x{}, CM is {}x{}", s.rows(), s.cols(),
                                     v.matrix().rows(), v.matrix().cols()));
  }
  const double tol = 1e-9 * std::max(1.0, s.cwiseAbs().maxCoeff() * s.cwiseAbs().maxCoeff());
  if (!is_symplectic(s, tol)) throw DomainError("transform is not symplectic");
  return CovMatrix(s * v.matrix() * s.transpose());
}

CovMatrix apply_local_symplectic(const CovMatrix& v, std::size_t mode, const Eigen::Matrix2d& s) {
  if (mode >= v.modes()) {
    throw DimensionError(fmt::format("mode {} out of range for {} modes", mode, v.modes()));
  }
  if (std::abs(s.determinant() - 1.0) > 1e-9) {
    throw DomainError(fmt::format("single-mode transform has det {} != 1", s.determinant()));
  }
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(v.matrix().rows(), v.matrix().cols());
  big.block<2, 2>(static_cast<Eigen::Index>(2 * mode), static_cast<Eigen::Index>(2 * mode)) = s;
  return CovMatrix(big * v.matrix() * big.transpose());
}

CovMatrix apply_beamsplitter(const CovMatrix& v, std::size_t i, std::size_t j, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(fmt::format("transmissivity must lie in [0, 1], got {}", t));
  }
  if (i >= v.modes() || j >= v.modes() || i == j) {
    throw DimensionError(fmt::format("invalid beam-splitter modes ({}, {}) for {} modes", i, j, v.modes()));
  }
  const double ct = std::sqrt(t);
  const double st = std::sqrt(1.0 - t);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(v.matrix().rows(), v.matrix().cols());
  const auto a = static_cast<Eigen::Index>(2 * i);
  const auto b = static_cast<Eigen::Index>(2 * j);
  for (Eigen::Index q = 0; q < 2; ++q) {
    s(a + q, a + q) = ct;
    s(a + q, b + q) = st;
    s(b + q, a + q) = -st;
    s(b + q, b + q) = ct;
  }
  return CovMatrix(s * v.matrix() * s.transpose());
}

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return (Eigen::Matrix2d() << c, s, -s, c).finished();
}

Eigen::Matrix2d squeezer(double r) {
  return (Eigen::Matrix2d() << std::exp(-r), 0.0, 0.0, std::exp(r)).finished();
}

namespace {

// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
// the phases of R's diagonal divided out.
Eigen::MatrixXcd haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

// a_k -> sum_j U_kj a_j in the (x1, p1, ..., xn, pn) ordering.
Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd& u) {
  const auto m = u.rows();
  Eigen::MatrixXd s(2 * m, 2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double re = u(k, j).real();
      const double im = u(k, j).imag();
      s(2 * k, 2 * j) = re;
      s(2 * k, 2 * j + 1) = -im;
      s(2 * k + 1, 2 * j) = im;
      s(2 * k + 1, 2 * j + 1) = re;
    }
  }
  return s;
}

}  // namespace

Eigen::MatrixXd random_symplectic(std::size_t n_modes, std::mt19937_64& rng, double max_squeeze) {
  const Eigen::MatrixXd left = passive_symplectic(haar_unitary(n_modes, rng));
  const Eigen::MatrixXd right = passive_symplectic(haar_unitary(n_modes, rng));
  std::uniform_real_distribution<double> squeeze(0.0, max_squeeze);
  const auto n = static_cast<Eigen::Index>(n_modes);
  Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    mid.block<2, 2>(2 * k, 2 * k) = squeezer(squeeze(rng));
  }
  return left * mid * right;
}

CovMatrix random_physical_cm(std::size_t n_modes, std::uint64_t seed, double max_squeeze,
                             double max_thermal) {
  if (n_modes == 0) throw DimensionError("random_physical_cm needs at least one mode");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> occupancy(0.0, max_thermal);
  const auto n = static_cast<Eigen::Index>(n_modes);
  Eigen::MatrixXd thermal_part = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double nu = occupancy(rng) + kVacuumVariance;
    thermal_part(2 * k, 2 * k) = nu;
    thermal_part(2 * k + 1, 2 * k + 1) = nu;
  }
  const Eigen::MatrixXd s = random_symplectic(n_modes, rng, max_squeeze);
  return CovMatrix(s * thermal_part * s.transpose());
}

}  // namespace cvswap::gaussian
