#pragma once

#include "cvswap/experiments/pipeline.hpp"
#include "cvswap/optomech/params.hpp"
#include "cvswap/optomech/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace cvswap::experiments {

struct Axis {
  std::string name;
  double min = 1.0;
  double max = 1.0;
  std::size_t points = 2;
  bool log_spaced = false;

  /// Grid values; the end points are exactly min and max.
  std::vector<double> values() const;
  void validate() const;
};

/// Grid over the filter bandwidth tau_b omega_m (outer) and the cavity loss
/// kappa / omega_m (inner), applied to both cavity modes. The c filter
/// follows tau_c = tau_b / tau_ratio; both filters sit on the sidebands
/// Omega_b = -omega_m, Omega_c = omega_m.
struct SweepSpec {
  Axis tau{"tau_b_omega_m", 1.0, 500.0, 40, true};
  Axis kappa{"kappa_over_omega_m", 0.2, 3.0, 30, false};
  double tau_ratio = 5.0;
  optomech::OmParams base = optomech::reference_params();
  PipelineOptions options;
  unsigned threads = 1;

  void validate() const;
};

/// Reads {"tau_b_omega_m": {min, max, points, spacing}, "kappa_over_omega_m":
/// {...}, "tau_ratio": x}; absent fields keep the values of `base`.
SweepSpec grid_from_json(const nlohmann::json& j, SweepSpec base = {});
nlohmann::json to_json(const SweepSpec& spec);

struct SweepRow {
  double tau_b_omega_m = 0.0;
  double kappa_over_omega_m = 0.0;
  double en_rr = 0.0;
  double en_cc = 0.0;
  bool certifying = false;
  bool stable = false;  ///< false for any point that could not be evaluated
  std::string error;    ///< reason for stable = false; not written to CSV
};

inline constexpr const char* kSweepCsvHeader = "tau_b_omega_m,kappa_over_omega_m,en_rr,en_cc,certifying,stable";

/// Never throws for physics failures: an unstable or non-converged point
/// becomes a row with stable = false and zero E_N.
SweepRow evaluate_point(const SweepSpec& spec, double tau_b_omega_m, double kappa_over_omega_m);

/// Rows in grid order, tau outer. Points are shared among spec.threads
/// workers; the result does not depend on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::string csv_line(const SweepRow& row);
nlohmann::json to_json(const SweepRow& row);

/// Writes the sweep as CSV to `path`, with the run configuration (grid,
/// site parameters, frame, integration settings) in `path`.run.json. Rows
/// already present in a file from an earlier run with the same configuration
/// are kept and only the missing ones are computed, so an interrupted sweep
/// can be resumed. Rows are appended in
/// grid order as they complete. Returns the number of rows computed.
std::size_t sweep_to_csv(const SweepSpec& spec, const std::string& path);

}  // namespace cvswap::experiments
