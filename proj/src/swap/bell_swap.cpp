#include "cvswap/swap/bell_swap.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/gaussian/entanglement.hpp"
#include "cvswap/gaussian/standard_form.hpp"
#include "cvswap/gaussian/symplectic.hpp"

#include <fmt/format.h>

namespace cvswap::swap {

namespace {

using Mat2 = Eigen::Matrix2d;

const Mat2 kZ = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();

struct MeasurementMatrix {
  Mat2 m_inv;
  double condition = 0.0;
};

MeasurementMatrix invert_measurement_matrix(const ThreeModeState& s1, const ThreeModeState& s2) {
  const Mat2 m = s1.B() + kZ * s2.B() * kZ;
  const Eigen::JacobiSVD<Mat2> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(1) > 0.0)) {
    throw MeasurementDegenerate("Bell-measurement matrix M = B1 + Z B2 Z is singular");
  }
  const double cond = sv(0) / sv(1);
  if (cond > kMaxConditionNumber) {
    throw MeasurementDegenerate(
        fmt::format("Bell-measurement matrix M is ill-conditioned (condition number {:.3e})", cond));
  }
  return {m.inverse(), cond};
}

Eigen::Matrix4d assemble(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
  Eigen::Matrix4d out;
  out << a, b, c, d;
  return out;
}

}  // namespace

SwapResult bell_swap(const ThreeModeState& s1, const ThreeModeState& s2) {
  for (const auto* s : {&s1, &s2}) {
    const auto rep = gaussian::validate_physical(s->cm());
    if (!rep.physical) {
      throw DomainError(fmt::format("bell_swap input {} is not physical (min symplectic eigenvalue {})",
                                    s == &s1 ? 1 : 2, rep.min_symplectic_eigenvalue));
    }
  }
  const auto [m_inv, cond] = invert_measurement_matrix(s1, s2);
  const Mat2 zmz = kZ * m_inv * kZ;

  const Mat2 d1 = s1.D(), d2 = s2.D();
  const Mat2 e1 = s1.E(), e2 = s2.E();

  const Mat2 r11 = s1.R() - d1 * m_inv * d1.transpose();
  const Mat2 r12 = d1 * m_inv * kZ * d2.transpose();
  const Mat2 r22 = s2.R() - d2 * zmz * d2.transpose();

  const Mat2 c11 = s1.C() - e1.transpose() * m_inv * e1;
  const Mat2 c12 = e1.transpose() * m_inv * kZ * e2;
  const Mat2 c22 = s2.C() - e2.transpose() * zmz * e2;

  const Eigen::Matrix4d x = assemble(s1.F() - d1 * m_inv * e1, d1 * m_inv * kZ * e2,  //
                                     d2 * kZ * m_inv * e1, s2.F() - d2 * zmz * e2);
  const Eigen::Matrix4d v_rr = assemble(r11, r12, r12.transpose(), r22);
  const Eigen::Matrix4d v_cc = assemble(c11, c12, c12.transpose(), c22);

  Eigen::MatrixXd out(8, 8);
  out << v_rr, x, x.transpose(), v_cc;

  SwapResult res{CovMatrix(std::move(out)), CovMatrix(v_rr), CovMatrix(v_cc), x};
  res.eta_rr = gaussian::ppt_min_eig(res.v_r1r2);
  res.eta_cc = gaussian::ppt_min_eig(res.v_c1c2);
  res.en_rr = gaussian::log_negativity_from_eta(res.eta_rr);
  res.en_cc = gaussian::log_negativity_from_eta(res.eta_cc);
  res.m_condition = cond;
  return res;
}

Displacements swap_displacements(const ThreeModeState& s1, const ThreeModeState& s2,
                                 const BellOutcome& outcome) {
  const auto [m_inv, cond] = invert_measurement_matrix(s1, s2);
  (void)cond;
  const Eigen::Vector2d m_y = s2.mean().segment<2>(2) - kZ * s1.mean().segment<2>(2);
  const Eigen::Vector2d o = Eigen::Vector2d(outcome.x_minus, outcome.p_plus) - m_y;
  Displacements d;
  d.d_r1 = s1.mean().segment<2>(0) - s1.D() * m_inv * kZ * o;
  d.d_r2 = s2.mean().segment<2>(0) + s2.D() * kZ * m_inv * kZ * o;
  return d;
}

BellOutcome OutcomeDistribution::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double z0 = gauss(rng);
  const double z1 = gauss(rng);
  const Mat2 l = covariance.llt().matrixL();
  const Eigen::Vector2d y = mean + l * Eigen::Vector2d(z0, z1);
  return {y(0), y(1)};
}

OutcomeDistribution bell_outcome_distribution(const ThreeModeState& s1, const ThreeModeState& s2) {
  OutcomeDistribution dist;
  dist.covariance = kZ * s1.B() * kZ + s2.B();
  dist.mean = s2.mean().segment<2>(2) - kZ * s1.mean().segment<2>(2);
  return dist;
}

EtaPair eta_closed_form(const ThreeModeState& s) {
  if (!gaussian::in_standard_form(s)) {
    throw PreconditionError(
        "eta_closed_form needs a standard-form state; use bell_swap for general inputs");
  }
  const auto mu = gaussian::purities(s);
  return {mu.mu_b / (2.0 * mu.mu_rb), mu.mu_b / (2.0 * mu.mu_bc)};
}

}  // namespace cvswap::swap
