#include "cvswap/gaussian/entanglement.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cvswap::gaussian {

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& v, std::size_t mode) {
  const auto p = static_cast<Eigen::Index>(2 * mode + 1);
  if (p >= v.rows()) {
    throw DimensionError(fmt::format("cannot transpose mode {} of a {}-mode CM", mode, v.rows() / 2));
  }
  Eigen::MatrixXd out = v;
  out.row(p) *= -1.0;
  out.col(p) *= -1.0;
  return out;
}

double ppt_min_eig(const CovMatrix& v, std::size_t transposed_mode) {
  if (v.modes() != 2) {
    throw DimensionError(fmt::format("ppt_min_eig needs a two-mode CM, got {} modes", v.modes()));
  }
  if (transposed_mode > 1) {
    throw DimensionError(fmt::format("transposed mode must be 0 or 1, got {}", transposed_mode));
  }
  const Eigen::Matrix4d m = v.matrix();
  const double det_a = m.block<2, 2>(0, 0).determinant();
  const double det_b = m.block<2, 2>(2, 2).determinant();
  const double det_c = m.block<2, 2>(0, 2).determinant();
  const double det_v = m.determinant();
  if (!(det_v > 0.0)) {
    throw DomainError(fmt::format("two-mode CM is not positive definite (det V = {:.6e})", det_v));
  }
  // Transposing either mode flips the sign of det C.
  const double delta = det_a + det_b - 2.0 * det_c;
  const double disc = std::max(0.0, delta * delta - 4.0 * det_v);
  return std::sqrt(2.0 * det_v / (delta + std::sqrt(disc)));
}

double log_negativity_from_eta(double eta) { return std::max(0.0, -std::log(2.0 * eta)); }

double log_negativity(const CovMatrix& v) { return log_negativity_from_eta(ppt_min_eig(v)); }

double purity(const CovMatrix& v) {
  const double det = v.matrix().determinant();
  if (!(det > 0.0)) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.matrix());
    const auto& s = svd.singularValues();
    throw NumericError(fmt::format("singular covariance matrix (det = {:.6e}, condition number {:.3e})",
                                   det, s(0) / s(s.size() - 1)));
  }
  return 1.0 / (std::pow(2.0, static_cast<double>(v.modes())) * std::sqrt(det));
}

PurityTriple purities(const ThreeModeState& s) {
  PurityTriple t;
  t.mu_rb = purity(s.v_rb());
  t.mu_bc = purity(s.v_bc());
  t.mu_b = purity(s.cm().reduced({1}));
  t.mu_c = purity(s.cm().reduced({2}));
  return t;
}

CertifyingReport is_certifying(const ThreeModeState& s) {
  CertifyingReport r;
  r.purities = purities(s);
  r.margin_rb_bc = r.purities.mu_rb - r.purities.mu_bc;
  r.margin_bc_b = r.purities.mu_bc - r.purities.mu_b;
  r.certifying = r.margin_rb_bc > kCertifyingTol && r.margin_bc_b > kCertifyingTol;
  return r;
}

double entangling_purity_bound(double mu_b, double mu_c) {
  return mu_b * mu_c / std::sqrt(mu_b * mu_b + mu_c * mu_c - mu_b * mu_b * mu_c * mu_c);
}

}  // namespace cvswap::gaussian
