// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status 1
// if any criterion fails.

#include "cvswap/errors.hpp"
#include "cvswap/experiments/pipeline.hpp"
#include "cvswap/experiments/sweep.hpp"
#include "cvswap/gaussian/entanglement.hpp"
#include "cvswap/gaussian/states.hpp"
#include "cvswap/gaussian/symplectic.hpp"
#include "cvswap/optomech/lyapunov.hpp"
#include "cvswap/optomech/model.hpp"
#include "cvswap/optomech/spectral.hpp"
#include "cvswap/swap/bell_swap.hpp"
#include "cvswap/swap/protocol.hpp"

#include "../support/fixtures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cvswap;
using gaussian::ThreeModeState;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  fmt::print("CRITERION {:2}: {} - {} ({})\n", id, pass ? "PASS" : "FAIL", what, detail);
  std::fflush(stdout);
}

void info(const std::string& text) {
  fmt::print("    info: {}\n", text);
  std::fflush(stdout);
}

// 1. PPT eigenvalues of the swapped blocks against the purity formula.
void purity_formula() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const ThreeModeState s = (i % 2 == 0) ? testing::random_standard_form_state(rng)
                                          : testing::random_mixed_standard_form(rng);
    const swap::SwapResult r = swap::bell_swap(s, s);
    const auto mu = gaussian::purities(s);
    worst = std::max(worst, std::abs(gaussian::ppt_min_eig(r.v_r1r2) - mu.mu_b / (2.0 * mu.mu_rb)));
    worst = std::max(worst, std::abs(gaussian::ppt_min_eig(r.v_c1c2) - mu.mu_b / (2.0 * mu.mu_bc)));
  }
  const double t = seconds_since(t0);
  report(1, worst <= 1e-10 && t < 60.0, "swapped PPT eigenvalues equal mu_B/(2 mu_RB) and mu_B/(2 mu_BC)",
         fmt::format("{} identical standard-form pairs, max |diff| {:.2e}, {:.2f} s", n, worst, t));
}

// 2. Entanglement ordering for certifying states.
void ordering() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2002);
  const int n = 1000;
  int proposals = 0;
  int found = 0;
  int violations = 0;
  double min_gap = 1e300;
  double min_cc = 1e300;
  while (found < n) {
    const ThreeModeState s = testing::random_mixed_standard_form(rng);
    ++proposals;
    if (!gaussian::is_certifying(s).certifying) continue;
    ++found;
    const swap::SwapResult r = swap::bell_swap(s, s);
    if (!(r.en_rr > r.en_cc && r.en_cc > 0.0)) ++violations;
    min_gap = std::min(min_gap, r.en_rr - r.en_cc);
    min_cc = std::min(min_cc, r.en_cc);
  }
  const double t = seconds_since(t0);
  report(2, violations == 0 && t < 120.0, "certifying states give E_N(RR) > E_N(CC) > 0",
         fmt::format("{} certifying of {} proposals, {} violations, min gap {:.2e}, min E_N(CC) {:.2e}, {:.2f} s",
                     found, proposals, violations, min_gap, min_cc, t));

  // Certifying states outside the standard-form family, swapped after
  // local alignment of each site.
  int generic = 0;
  int cc_ok = 0;
  int rr_ok = 0;
  for (std::uint64_t seed = 1; seed <= 300000 && generic < 200; ++seed) {
    const ThreeModeState s(gaussian::random_physical_cm(3, seed, 1.0, 0.5));
    if (!gaussian::is_certifying(s).certifying) continue;
    ++generic;
    const auto a = gaussian::align_frame(s, gaussian::AlignTarget::kCertification).state;
    const swap::SwapResult r = swap::bell_swap(a, a);
    if (r.en_cc > 0.0) ++cc_ok;
    if (r.en_rr > r.en_cc) ++rr_ok;
  }
  info(fmt::format("generic certifying states, certification-aligned frame: E_N(CC) > 0 in {}/{}, "
                   "E_N(RR) > E_N(CC) in {}/{}",
                   cc_ok, generic, rr_ok, generic));
}

// Exact draw from N(mean, var) restricted to [lo, hi] for a window much
// narrower than the standard deviation: uniform proposal, density-ratio
// acceptance.
double truncated_normal(std::mt19937_64& rng, double mean, double var, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double peak = std::clamp(mean, lo, hi);
  while (true) {
    const double x = lo + (hi - lo) * u(rng);
    const double log_ratio = -((x - mean) * (x - mean) - (peak - mean) * (peak - mean)) / (2.0 * var);
    if (std::log(u(rng)) <= log_ratio) return x;
  }
}

struct McOutcome {
  int entries = 0;
  int outside = 0;
  double worst_z = 0.0;
  int mean_entries = 0;
  int mean_outside = 0;
};

// Samples the joint Wigner function of two sites conditioned on the Bell
// outcome landing in a small window around `center`, and compares the
// empirical covariance of (R1, R2, C1, C2) with bell_swap.
McOutcome monte_carlo_pair(const ThreeModeState& s1, const ThreeModeState& s2, const Eigen::Vector2d& center,
                           std::mt19937_64& rng, int samples) {
  const Eigen::MatrixXd sigma = testing::joint_cm(s1, s2);
  // w = T u = (y, R1, R2, C1, C2, x_B1, p_B1) is an invertible change of variables.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(12, 12);
  t.topRows(2) = testing::bell_observation();
  t.middleRows(2, 8) = testing::remaining_selector();
  t(10, 2) = 1.0;
  t(11, 3) = 1.0;
  const Eigen::MatrixXd w = t * sigma * t.transpose();
  const Eigen::Matrix2d w_yy = w.topLeftCorner(2, 2);
  const Eigen::MatrixXd gain = w.bottomLeftCorner(10, 2) * w_yy.inverse();
  const Eigen::MatrixXd rest_cov = w.bottomRightCorner(10, 10) - gain * w.topRightCorner(2, 10);
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(rest_cov).matrixL();

  const double h = 1e-3;
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Eigen::Matrix<double, 8, 1>> draws(static_cast<std::size_t>(samples));
  Eigen::VectorXd xi(10);
  for (auto& d : draws) {
    const double y0 = truncated_normal(rng, 0.0, w_yy(0, 0), center(0) - h, center(0) + h);
    const double m1 = w_yy(1, 0) / w_yy(0, 0) * y0;
    const double v1 = w_yy(1, 1) - w_yy(1, 0) * w_yy(1, 0) / w_yy(0, 0);
    const double y1 = truncated_normal(rng, m1, v1, center(1) - h, center(1) + h);
    for (int k = 0; k < 10; ++k) xi(k) = g(rng);
    const Eigen::VectorXd z = gain * Eigen::Vector2d(y0, y1) + chol * xi;
    d = z.head<8>();
  }

  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  for (const auto& d : draws) mean += d;
  mean /= samples;
  Eigen::Matrix<double, 8, 8> cov = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 8> sq = Eigen::Matrix<double, 8, 8>::Zero();
  for (const auto& d : draws) {
    const Eigen::Matrix<double, 8, 1> c = d - mean;
    const Eigen::Matrix<double, 8, 8> p = c * c.transpose();
    cov += p;
    sq += p.cwiseProduct(p);
  }
  cov /= samples;
  sq /= samples;

  const swap::SwapResult r = swap::bell_swap(s1, s2);
  McOutcome out;
  for (int i = 0; i < 8; ++i) {
    for (int j = i; j < 8; ++j) {
      const double se = std::sqrt((sq(i, j) - cov(i, j) * cov(i, j)) / samples);
      const double z = std::abs(cov(i, j) - r.v_out.matrix()(i, j)) / se;
      ++out.entries;
      if (z > 3.0) ++out.outside;
      out.worst_z = std::max(out.worst_z, z);
    }
  }
  const swap::Displacements disp = swap::swap_displacements(s1, s2, {center(0), center(1)});
  Eigen::Vector4d expected;
  expected << disp.d_r1, disp.d_r2;
  for (int i = 0; i < 4; ++i) {
    const double z = std::abs(mean(i) - expected(i)) / std::sqrt(cov(i, i) / samples);
    ++out.mean_entries;
    if (z > 3.0) ++out.mean_outside;
  }
  return out;
}

// 3. Monte-Carlo oracle for the conditional covariance.
void monte_carlo() {
  const auto t0 = Clock::now();
  const int pairs = 20;
  const int samples = 100000;
  McOutcome total;
  for (int i = 0; i < pairs; ++i) {
    std::mt19937_64 rng(swap::split_seed(3003, static_cast<std::uint64_t>(i)));
    ThreeModeState s1(gaussian::vacuum(3));
    ThreeModeState s2(gaussian::vacuum(3));
    if (i < 15) {
      s1 = ThreeModeState(gaussian::random_physical_cm(3, swap::split_seed(3004, 2 * static_cast<std::uint64_t>(i))));
      s2 = ThreeModeState(
          gaussian::random_physical_cm(3, swap::split_seed(3004, 2 * static_cast<std::uint64_t>(i) + 1)));
    } else {
      s1 = testing::random_certifying_standard_form(rng);
      s2 = s1;
    }
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    if (i % 2 == 1) {
      const swap::BellOutcome o = swap::bell_outcome_distribution(s1, s2).sample(rng);
      center << o.x_minus, o.p_plus;
    }
    const McOutcome r = monte_carlo_pair(s1, s2, center, rng, samples);
    total.entries += r.entries;
    total.outside += r.outside;
    total.worst_z = std::max(total.worst_z, r.worst_z);
    total.mean_entries += r.mean_entries;
    total.mean_outside += r.mean_outside;
  }
  const double expected = 0.0027 * total.entries;
  report(3, total.outside == 0, "Monte-Carlo conditional covariance within 3 standard errors of bell_swap",
         fmt::format("{} pairs x {} samples, {}/{} entries beyond 3 SE (about {:.1f} expected by chance), "
                     "max |z| {:.2f}, {:.1f} s",
                     pairs, samples, total.outside, total.entries, expected, total.worst_z, seconds_since(t0)));
  // Chance of at least this many exceedances if every entry is exact.
  const double p3 = std::erfc(3.0 / std::sqrt(2.0));
  double tail = 0.0;
  double term = std::pow(1.0 - p3, total.entries);
  for (int k = 0; k <= total.entries; ++k) {
    if (k >= total.outside) tail += term;
    term *= static_cast<double>(total.entries - k) / static_cast<double>(k + 1) * p3 / (1.0 - p3);
  }
  info(fmt::format("P(at least {} of {} beyond 3 SE | exact covariance) = {:.2f}", total.outside, total.entries,
                   tail));
  info(fmt::format("conditional means of R1, R2 beyond 3 SE: {}/{}", total.mean_outside, total.mean_entries));
}

// 4. TMSV swap.
void tmsv_swap() {
  double worst = 0.0;
  bool cc_zero = true;
  for (const double r : {0.1, 0.5, 1.0}) {
    const ThreeModeState s(gaussian::direct_sum(gaussian::tmsv(r), gaussian::vacuum(1)));
    const swap::SwapResult res = swap::bell_swap(s, s);
    worst = std::max(worst, std::abs(res.en_rr - std::log(std::cosh(2.0 * r))));
    cc_zero = cc_zero && res.en_cc == 0.0;
  }
  report(4, worst <= 1e-9 && cc_zero, "TMSV sites give E_N(RR) = ln cosh 2r and E_N(CC) = 0",
         fmt::format("r in {{0.1, 0.5, 1.0}}, max |diff| {:.2e}, E_N(CC) exactly zero: {}", worst, cc_zero));
}

// 5. Single-photon coupling at the reference site.
void coupling() {
  const optomech::Couplings c = optomech::coupling_constants(optomech::reference_params());
  const bool pass = std::abs(c.g0_b - 1e3) <= 100.0 && std::abs(c.g0_c - 1e3) <= 100.0;
  report(5, pass, "single-photon couplings within 10% of 1e3 rad/s",
         fmt::format("G0_b = {:.4f} rad/s, G0_c = {:.4f} rad/s", c.g0_b, c.g0_c));
}

// 6. Lyapunov against the frequency integral.
void lyapunov_vs_spectral() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int done = 0;
  int rejected = 0;
  double worst = 0.0;
  while (done < 10) {
    optomech::OmParams p = optomech::reference_params();
    const double wm = p.mech_freq;
    p.mode_b.power = 8e-3 * u(rng);
    p.mode_c.power = 8e-3 * u(rng);
    p.mode_b.kappa = (0.2 + 2.8 * u(rng)) * wm;
    p.mode_c.kappa = (0.2 + 2.8 * u(rng)) * wm;
    p.mode_b.detuning = -1.5 * u(rng) * wm;
    p.mode_c.detuning = 1.5 * u(rng) * wm;
    p.temperature = u(rng);
    const optomech::LinearModel m = optomech::build_linear_model(p);
    if (!optomech::stability_check(m)) {
      ++rejected;
      continue;
    }
    const Eigen::MatrixXd a = optomech::intracavity_steady_cm(m).matrix();
    const Eigen::MatrixXd b = optomech::spectral_intracavity_cm(m).matrix();
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
    ++done;
  }
  const double t = seconds_since(t0);
  report(6, worst <= 1e-6 && t < 300.0, "Lyapunov and frequency-integrated intracavity CMs agree",
         fmt::format("10 random stable sets ({} unstable draws skipped), max relative diff {:.2e}, {:.2f} s",
                     rejected, worst, t));
}

// 7. Physicality on a 10x10 sub-grid of the default sweep.
void physicality() {
  const experiments::SweepSpec spec;
  const auto taus = spec.tau.values();
  const auto kappas = spec.kappa.values();
  int stable = 0;
  int unstable = 0;
  int bad = 0;
  double min_nu = 1e300;
  for (std::size_t i = 0; i < 40; i += 4) {
    for (std::size_t j = 0; j < 30; j += 3) {
      optomech::OmParams p = spec.base;
      p.mode_b.kappa = kappas[j] * p.mech_freq;
      p.mode_c.kappa = kappas[j] * p.mech_freq;
      const optomech::LinearModel m = optomech::build_linear_model(p);
      if (!optomech::stability_check(m)) {
        ++unstable;
        continue;
      }
      const double tau_b = taus[i] / p.mech_freq;
      const auto out = optomech::output_cm(m, {tau_b, -p.mech_freq}, {tau_b / spec.tau_ratio, p.mech_freq});
      const double nu = gaussian::symplectic_eigenvalues(out.cm()).minCoeff();
      min_nu = std::min(min_nu, nu);
      if (nu < 0.5 - 1e-8 || !gaussian::validate_physical(out.cm()).physical) ++bad;
      ++stable;
    }
  }
  report(7, bad == 0 && stable > 0, "output CMs are physical on a 10x10 sub-grid",
         fmt::format("{} stable points ({} unstable), {} failures, min symplectic eigenvalue {:.9f}", stable,
                     unstable, bad, min_nu));
}

// 8. Structure of the default sweep at the reference parameters.
std::vector<experiments::SweepRow> default_sweep() {
  const auto t0 = Clock::now();
  const experiments::SweepSpec spec;
  const auto rows = experiments::run_sweep(spec);
  const double t = seconds_since(t0);

  int certified = 0;
  int unstable = 0;
  double lo = 1e300;
  double hi = -1e300;
  std::vector<int> mask(rows.size(), 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (!r.stable) {
      ++unstable;
      continue;
    }
    lo = std::min(lo, r.en_rr);
    hi = std::max(hi, r.en_rr);
    if (r.certifying && r.en_rr > r.en_cc && r.en_cc > 0.0) {
      ++certified;
      mask[k] = 1;
    }
  }
  // Connected components of the certified region (4-neighbour).
  const std::size_t nk = spec.kappa.points;
  int components = 0;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (mask[k] != 1) continue;
    ++components;
    std::queue<std::size_t> q;
    q.push(k);
    mask[k] = 2;
    while (!q.empty()) {
      const std::size_t c = q.front();
      q.pop();
      const std::size_t ci = c / nk;
      const std::size_t cj = c % nk;
      std::vector<std::size_t> nb;
      if (ci > 0) nb.push_back(c - nk);
      if (c + nk < mask.size()) nb.push_back(c + nk);
      if (cj > 0) nb.push_back(c - 1);
      if (cj + 1 < nk) nb.push_back(c + 1);
      for (const std::size_t x : nb) {
        if (mask[x] == 1) {
          mask[x] = 2;
          q.push(x);
        }
      }
    }
  }
  int certifying_rows = 0;
  int ordering_violations = 0;
  for (const auto& r : rows) {
    if (!r.certifying) continue;
    ++certifying_rows;
    if (!(r.en_rr > r.en_cc && r.en_cc > 0.0)) ++ordering_violations;
  }
  const bool pass = certified > 0 && hi - lo > 0.01 && t < 1800.0;
  report(8, pass, "default sweep has a certified region and non-trivial E_N(RR)",
         fmt::format("{} points, {} certified with E_N(RR) > E_N(CC) > 0, E_N(RR) in [{:.4f}, {:.4f}], "
                     "{} unstable, {:.1f} s",
                     rows.size(), certified, lo, hi, unstable, t));
  info(fmt::format("certified region: {} connected component(s); certifying rows violating the ordering: {}/{}",
                   components, ordering_violations, certifying_rows));
  return rows;
}

// 9. Heating the bath lowers the remote entanglement.
void thermal() {
  optomech::OmParams p = optomech::reference_params();
  const auto f = optomech::reference_filters(p.mech_freq, 10.0);
  const experiments::PipelineOptions opts;
  const std::vector<double> temps = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<double> en;
  p.temperature = temps.front();
  const bool start_certifying = experiments::evaluate_site(p, f.b, f.c, opts).certifying.certifying;
  for (const double t : temps) {
    p.temperature = t;
    en.push_back(experiments::evaluate_site(p, f.b, f.c, opts).swap.en_rr);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < en.size(); ++i) {
    // Strict while entangled; once E_N reaches zero it stays there.
    if (en[i - 1] > 0.0 ? !(en[i] < en[i - 1]) : en[i] != 0.0) monotone = false;
  }
  std::string trace;
  for (std::size_t i = 0; i < en.size(); ++i) trace += fmt::format("{}{} K: {:.4f}", i ? ", " : "", temps[i], en[i]);
  report(9, start_certifying && monotone && en.back() < en.front(),
         "E_N(RR) decreases as T rises from 0.1 K to 10 K at a certifying point",
         fmt::format("tau_b omega_m = 10, kappa = omega_m; {}", trace));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Determinism of the written artifacts.
void determinism(const std::vector<experiments::SweepRow>& first) {
  experiments::SweepSpec spec;
  spec.threads = 2;
  const auto second = experiments::run_sweep(spec);
  bool sweep_same = first.size() == second.size();
  for (std::size_t i = 0; sweep_same && i < first.size(); ++i) {
    sweep_same = experiments::csv_line(first[i]) == experiments::csv_line(second[i]);
  }

  experiments::SweepSpec small;
  small.tau.points = 4;
  small.kappa.points = 4;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "cvswap_acceptance_a.csv").string();
  const std::string b = (dir / "cvswap_acceptance_b.csv").string();
  for (const auto& path : {a, b}) {
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".run.json");
    experiments::sweep_to_csv(small, path);
  }
  const bool csv_same = slurp(a) == slurp(b) && !slurp(a).empty();
  for (const auto& path : {a, b}) {
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".run.json");
  }

  const optomech::OmParams p = optomech::reference_params();
  const auto f = optomech::reference_filters(p.mech_freq, 10.0);
  experiments::PipelineOptions opts;
  opts.seed = 77;
  opts.rounds = 20;
  const bool json_same = experiments::run_pipeline(p, f.b, f.c, opts).dump(2) ==
                         experiments::run_pipeline(p, f.b, f.c, opts).dump(2);

  std::mt19937_64 rng(10010);
  const ThreeModeState s = testing::random_certifying_standard_form(rng);
  const bool protocol_same = swap::protocol_csv(swap::run_protocol(s, s, 50, 5).rounds) ==
                             swap::protocol_csv(swap::run_protocol(s, s, 50, 5).rounds);

  report(10, sweep_same && csv_same && json_same && protocol_same, "repeated runs give byte-identical artifacts",
         fmt::format("sweep rows (1 vs 2 threads): {}, sweep CSV files: {}, pipeline JSON: {}, protocol CSV: {}",
                     sweep_same, csv_same, json_same, protocol_same));
}

}  // namespace

int main() {
  try {
    purity_formula();
    ordering();
    monte_carlo();
    tmsv_swap();
    coupling();
    lyapunov_vs_spectral();
    physicality();
    const auto rows = default_sweep();
    thermal();
    determinism(rows);
  } catch (const std::exception& e) {
    fmt::print("acceptance aborted: {}\n", e.what());
    return 2;
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
