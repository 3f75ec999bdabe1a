#include "cvswap/optomech/quadrature.hpp"

#include "cvswap/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <queue>

namespace cvswap::optomech {

namespace {

// Kronrod abscissae (descending) and weights; odd indices are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467768170708,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  Eigen::VectorXd value;
  Eigen::VectorXd error;
  double priority;  // largest component error relative to its tolerance
};

void gk15(const VectorIntegrand& f, std::size_t dim, Panel& p, std::size_t& evals) {
  const double centre = 0.5 * (p.a + p.b);
  const double half = 0.5 * (p.b - p.a);
  Eigen::VectorXd kron = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd gauss = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd f1(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd f2(static_cast<Eigen::Index>(dim));
  f(centre, f1);
  kron += kWgk[7] * f1;
  gauss += kWg[3] * f1;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f(centre - dx, f1);
    f(centre + dx, f2);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  p.value = half * kron;
  p.error = (half * (kron - gauss)).cwiseAbs();
}

struct ByPriority {
  bool operator()(const Panel* x, const Panel* y) const {
    if (x->priority != y->priority) return x->priority < y->priority;
    return x->a > y->a;  // deterministic tie-break
  }
};

}  // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                    std::vector<double> breakpoints, const QuadratureOptions& options) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_adaptive: need a finite interval with a < b");
  }
  if (dim == 0) throw DimensionError("integrate_adaptive: zero-dimensional integrand");

  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (const double x : breakpoints) {
    if (x > a && x < b && x > cuts.back()) cuts.push_back(x);
  }
  cuts.push_back(b);

  QuadratureResult result;
  std::vector<std::unique_ptr<Panel>> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto p = std::make_unique<Panel>(Panel{cuts[i], cuts[i + 1], {}, {}, 0.0});
    gk15(f, dim, *p, result.evaluations);
    panels.push_back(std::move(p));
  }

  const auto n = static_cast<Eigen::Index>(dim);
  auto totals = [&](Eigen::VectorXd& value, Eigen::VectorXd& error) {
    std::vector<const Panel*> ordered;
    ordered.reserve(panels.size());
    for (const auto& p : panels) ordered.push_back(p.get());
    std::sort(ordered.begin(), ordered.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });
    value = Eigen::VectorXd::Zero(n);
    error = Eigen::VectorXd::Zero(n);
    for (const Panel* p : ordered) {
      value += p->value;
      error += p->error;
    }
  };
  auto tolerance = [&](const Eigen::VectorXd& value) {
    return (options.rel_tol * value.cwiseAbs()).cwiseMax(options.abs_tol).eval();
  };

  Eigen::VectorXd value;
  Eigen::VectorXd error;
  totals(value, error);

  std::priority_queue<Panel*, std::vector<Panel*>, ByPriority> queue;
  auto rescore = [&]() {
    const Eigen::VectorXd tol = tolerance(value);
    queue = {};
    for (const auto& p : panels) {
      p->priority = p->error.cwiseQuotient(tol).maxCoeff();
      queue.push(p.get());
    }
  };
  rescore();

  std::size_t since_rescore = 0;
  while (true) {
    if ((error.array() <= tolerance(value).array()).all()) {
      result.converged = true;
      break;
    }
    if (panels.size() >= options.max_intervals) break;
    Panel* worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst->a + worst->b);
    if (!(mid > worst->a && mid < worst->b)) {
      // Interval at machine resolution; it cannot be refined further.
      worst->priority = -1.0;
      queue.push(worst);
      if (queue.top() == worst) break;
      continue;
    }
    auto right = std::make_unique<Panel>(Panel{mid, worst->b, {}, {}, 0.0});
    worst->b = mid;
    error -= worst->error;
    value -= worst->value;
    gk15(f, dim, *worst, result.evaluations);
    gk15(f, dim, *right, result.evaluations);
    value += worst->value + right->value;
    error += worst->error + right->error;
    const Eigen::VectorXd tol = tolerance(value);
    worst->priority = worst->error.cwiseQuotient(tol).maxCoeff();
    right->priority = right->error.cwiseQuotient(tol).maxCoeff();
    queue.push(worst);
    queue.push(right.get());
    panels.push_back(std::move(right));
    // Running sums drift and tolerances move with the value; refresh both.
    if (++since_rescore == 256) {
      since_rescore = 0;
      totals(value, error);
      rescore();
    }
  }
  totals(value, error);
  result.value = value;
  result.error = error;
  result.intervals = panels.size();
  result.converged = (error.array() <= tolerance(value).array()).all();
  return result;
}

}  // namespace cvswap::optomech
