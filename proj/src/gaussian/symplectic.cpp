#include "cvswap/gaussian/symplectic.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvswap::gaussian {

Eigen::VectorXd symplectic_spectrum(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() == 0) {
    throw DimensionError(fmt::format("symplectic spectrum needs an even square matrix, got {}x{}",
                                     v.rows(), v.cols()));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() != Eigen::Success) {
    throw DomainError("matrix is not positive definite; symplectic spectrum undefined");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const auto n = v.rows() / 2;
  const Eigen::MatrixXd k = l.transpose() * symplectic_form(static_cast<std::size_t>(n)) * l;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  Eigen::VectorXd sv = svd.singularValues();
  std::sort(sv.data(), sv.data() + sv.size());

  Eigen::VectorXd nu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Singular values of a real antisymmetric matrix come in equal pairs.
    nu(i) = 0.5 * (sv(2 * i) + sv(2 * i + 1));
  }
  return nu;
}

Eigen::VectorXd symplectic_eigenvalues(const CovMatrix& v) {
  const auto report = validate_physical(v);
  if (!report.physical) {
    throw DomainError(fmt::format("non-physical covariance matrix (min symplectic eigenvalue {:.12g})",
                                  report.min_symplectic_eigenvalue));
  }
  return symplectic_spectrum(v.matrix());
}

PhysicalityReport validate_physical(const CovMatrix& v, double tol) {
  PhysicalityReport report;
  Eigen::LLT<Eigen::MatrixXd> llt(v.matrix());
  if (llt.info() != Eigen::Success) {
    report.min_symplectic_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.positive_definite = true;
  report.min_symplectic_eigenvalue = symplectic_spectrum(v.matrix()).minCoeff();
  report.physical = report.min_symplectic_eigenvalue >= kVacuumVariance - tol;
  return report;
}

PhysicalityReport validate_physical(const Eigen::MatrixXd& v, double tol) {
  return validate_physical(CovMatrix(v), tol);
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace cvswap::gaussian
