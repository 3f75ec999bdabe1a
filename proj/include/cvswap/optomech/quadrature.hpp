#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace cvswap::optomech {

/// Vector-valued integrand: writes f(x) into `out` (already sized).
using VectorIntegrand = std::function<void(double x, Eigen::Ref<Eigen::VectorXd> out)>;

struct QuadratureOptions {
  double abs_tol = 1e-8;       ///< per component
  double rel_tol = 1e-10;      ///< per component, relative to |integral|
  std::size_t max_intervals = 20000;
};

struct QuadratureResult {
  Eigen::VectorXd value;
  Eigen::VectorXd error;       ///< |K15 - G7| summed over intervals
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Global adaptive Gauss-Kronrod (7/15) quadrature of a vector integrand over
/// [a, b], starting from the panels cut at `breakpoints` (points outside
/// (a, b) are ignored). The interval with the largest scaled error is
/// bisected until every component satisfies
/// error <= max(abs_tol, rel_tol |value|) or max_intervals is reached.
/// Panel sums are taken in position order, so results are reproducible.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                    std::vector<double> breakpoints, const QuadratureOptions& options = {});

}  // namespace cvswap::optomech
