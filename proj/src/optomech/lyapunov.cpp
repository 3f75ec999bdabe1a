#include "cvswap/optomech/lyapunov.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

namespace cvswap::optomech {

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || d.rows() != n || d.cols() != n) {
    throw DimensionError(fmt::format("lyapunov: A is {}x{}, D is {}x{}", a.rows(), a.cols(), d.rows(), d.cols()));
  }
  // Column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
  const Eigen::Index nn = n * n;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.block(i * n, i * n, n, n) += a;
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n).diagonal().array() += a(i, j);
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd(d).data(), nn);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) throw NumericError("lyapunov: A and -A share an eigenvalue");
  Eigen::VectorXd x = lu.solve(rhs);
  x += lu.solve(rhs - k * x);
  Eigen::MatrixXd v = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (v + v.transpose());
}

gaussian::CovMatrix intracavity_steady_cm(const LinearModel& model) {
  if (!stability_check(model)) {
    throw StabilityError(fmt::format("unstable: largest eigenvalue real part {:.6g} omega_m",
                                     max_growth_rate(model) / model.omega_m));
  }
  // Work in units of omega_m to keep the Kronecker system well scaled.
  const Eigen::MatrixXd a = model.drift / model.omega_m;
  const Eigen::MatrixXd d = model.diffusion / model.omega_m;
  return gaussian::CovMatrix(solve_lyapunov(a, d));
}

}  // namespace cvswap::optomech
