#include "cvswap/gaussian/standard_form.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace cvswap::gaussian {

namespace {

using Mat2 = Eigen::Matrix2d;

const Mat2 kZ = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();

bool is_diagonal(const Mat2& m, double scale, double tol) {
  return std::abs(m(0, 1)) <= tol * scale && std::abs(m(1, 0)) <= tol * scale;
}

bool is_scalar(const Mat2& m, double scale, double tol) {
  return is_diagonal(m, scale, tol) && std::abs(m(0, 0) - m(1, 1)) <= tol * scale;
}

// (det M)^{1/4} M^{-1/2}: unit-determinant squeezer taking M to sqrt(det M) I.
Mat2 normalizing_squeezer(const Mat2& m, double scale, const char* name) {
  if (is_scalar(m, scale, kStandardFormTol)) return Mat2::Identity();
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  const auto& lam = es.eigenvalues();
  if (!(lam(0) > 1e-14 * scale)) {
    throw StandardFormUnavailable(fmt::format("diagonal block {} is singular", name));
  }
  const Mat2 inv_sqrt = es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
  return std::pow(m.determinant(), 0.25) * inv_sqrt;
}

// m = U diag(s) W^T with U, W proper rotations; s may carry a sign.
struct ProperSvd {
  Mat2 u;
  Eigen::Vector2d s;
  Mat2 w;
};

ProperSvd proper_svd(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProperSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (out.u.determinant() < 0.0) {
    out.u.col(1) *= -1.0;
    out.s(1) *= -1.0;
  }
  if (out.w.determinant() < 0.0) {
    out.w.col(1) *= -1.0;
    out.s(1) *= -1.0;
  }
  return out;
}

Eigen::MatrixXd apply_local(const Eigen::MatrixXd& v, const std::array<Mat2, 3>& s) {
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(6, 6);
  for (int k = 0; k < 3; ++k) big.block<2, 2>(2 * k, 2 * k) = s[static_cast<std::size_t>(k)];
  return big * v * big.transpose();
}

double layout_residual(const Eigen::MatrixXd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  double res = 0.0;
  for (int k = 0; k < 3; ++k) {
    res = std::max(res, std::abs(v(2 * k, 2 * k + 1)));
    res = std::max(res, std::abs(v(2 * k, 2 * k) - v(2 * k + 1, 2 * k + 1)));
  }
  res = std::max({res, std::abs(v(0, 3)), std::abs(v(1, 2)), std::abs(v(2, 5)), std::abs(v(3, 4))});
  return res / scale;
}

}  // namespace

CovMatrix StandardFormCM::to_cov() const {
  Eigen::MatrixXd v(6, 6);
  // clang-format off
  v << r,    0.0,   d,    0.0,  f,    f_p,
       0.0,  r,     0.0,  d_p,  f_pp, f_ppp,
       d,    0.0,   b,    0.0,  e,    0.0,
       0.0,  d_p,   0.0,  b,    0.0,  e_p,
       f,    f_pp,  e,    0.0,  c,    0.0,
       f_p,  f_ppp, 0.0,  e_p,  0.0,  c;
  // clang-format on
  return CovMatrix(std::move(v));
}

bool in_standard_form(const ThreeModeState& s, double tol) {
  return layout_residual(s.cm().matrix()) <= tol;
}

Eigen::MatrixXd local_transform(std::size_t n_modes, std::size_t mode, const Eigen::Matrix2d& s) {
  if (mode >= n_modes) {
    throw DimensionError(fmt::format("mode {} out of range for {} modes", mode, n_modes));
  }
  const auto n = static_cast<Eigen::Index>(2 * n_modes);
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(n, n);
  big.block<2, 2>(static_cast<Eigen::Index>(2 * mode), static_cast<Eigen::Index>(2 * mode)) = s;
  return big;
}

AlignedState align_frame(const ThreeModeState& s, AlignTarget target) {
  const Eigen::MatrixXd v0 = s.cm().matrix();
  const double scale = v0.cwiseAbs().maxCoeff();
  std::array<Mat2, 3> t = {normalizing_squeezer(s.R(), scale, "R"), normalizing_squeezer(s.B(), scale, "B"),
                           normalizing_squeezer(s.C(), scale, "C")};
  const Eigen::MatrixXd v1 = apply_local(v0, t);
  const bool remote = target == AlignTarget::kRemote;
  const Mat2 block = remote ? Mat2(v1.block<2, 2>(0, 2)) : Mat2(v1.block<2, 2>(2, 4));
  if (!is_diagonal(block, scale, kStandardFormTol)) {
    const ProperSvd svd = proper_svd(block);
    const std::size_t left = remote ? 0 : 1;
    t[left] = svd.u.transpose() * t[left];
    t[left + 1] = svd.w.transpose() * t[left + 1];
  }
  Eigen::Matrix<double, 6, 1> mean = s.mean();
  for (int k = 0; k < 3; ++k) mean.segment<2>(2 * k) = t[static_cast<std::size_t>(k)] * mean.segment<2>(2 * k);
  return {ThreeModeState(CovMatrix(apply_local(v0, t)), mean), t};
}

StandardFormResult standard_form_reduce(const ThreeModeState& s) {
  const Eigen::MatrixXd v0 = s.cm().matrix();
  const double scale = v0.cwiseAbs().maxCoeff();
  const double tol = kStandardFormTol;

  std::array<Mat2, 3> sq = {normalizing_squeezer(s.R(), scale, "R"),
                            normalizing_squeezer(s.B(), scale, "B"),
                            normalizing_squeezer(s.C(), scale, "C")};
  const Eigen::MatrixXd v1 = apply_local(v0, sq);
  const Mat2 d1 = v1.block<2, 2>(0, 2);
  const Mat2 e1 = v1.block<2, 2>(2, 4);

  if (std::abs(d1.determinant()) <= 1e-12 * scale * scale) {
    throw StandardFormUnavailable("block D is singular");
  }
  if (std::abs(e1.determinant()) <= 1e-12 * scale * scale) {
    throw StandardFormUnavailable("block E is singular");
  }

  Mat2 o_r = Mat2::Identity();
  Mat2 o_b = Mat2::Identity();
  Mat2 o_c = Mat2::Identity();
  if (!is_diagonal(d1, scale, tol)) {
    const ProperSvd svd = proper_svd(d1);
    o_r = svd.u.transpose();
    o_b = svd.w.transpose();
  }
  const Mat2 d2 = o_r * d1 * o_b.transpose();
  const Mat2 e2 = o_b * e1;

  if (!is_diagonal(e2, scale, tol)) {
    const bool degenerate = std::abs(std::abs(d2(0, 0)) - std::abs(d2(1, 1))) <= tol * scale;
    if (degenerate) {
      // D' = sigma I is kept by equal rotations on R and B, D' = sigma Z by
      // a rotation Q on B paired with Z Q Z on R.
      const ProperSvd svd = proper_svd(e2);
      const Mat2 q = svd.u.transpose();
      const bool same_sign = d2(0, 0) * d2(1, 1) > 0.0;
      o_r = (same_sign ? q : Mat2(kZ * q * kZ)) * o_r;
      o_b = q * o_b;
      o_c = svd.w.transpose();
    } else {
      const double overlap = e2.row(0).dot(e2.row(1));
      const double norm0 = e2.row(0).norm();
      const double norm1 = e2.row(1).norm();
      if (std::abs(overlap) > 1e-9 * norm0 * norm1) {
        throw StandardFormUnavailable(fmt::format(
            "E cannot be diagonalized once D is diagonal (row overlap {:.3e}); the state lies "
            "outside the standard-form family",
            overlap / (norm0 * norm1)));
      }
      Mat2 q;
      q.row(0) = e2.row(0) / norm0;
      q.row(1) = e2.row(1) / norm1;
      o_c = q.determinant() > 0.0 ? q : Mat2(kZ * q);
    }
  }

  StandardFormResult out;
  out.transforms = {o_r * sq[0], o_b * sq[1], o_c * sq[2]};
  const Eigen::MatrixXd v = apply_local(v0, out.transforms);
  out.residual = layout_residual(v);

  auto& f = out.form;
  f.r = 0.5 * (v(0, 0) + v(1, 1));
  f.b = 0.5 * (v(2, 2) + v(3, 3));
  f.c = 0.5 * (v(4, 4) + v(5, 5));
  f.d = v(0, 2);
  f.d_p = v(1, 3);
  f.e = v(2, 4);
  f.e_p = v(3, 5);
  f.f = v(0, 4);
  f.f_p = v(0, 5);
  f.f_pp = v(1, 4);
  f.f_ppp = v(1, 5);
  return out;
}

}  // namespace cvswap::gaussian
