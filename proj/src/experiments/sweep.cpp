#include "cvswap/experiments/sweep.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/gaussian/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace cvswap::experiments {

namespace {

struct GridPoint {
  double tau;
  double kappa;
};

std::vector<GridPoint> grid(const SweepSpec& spec) {
  std::vector<GridPoint> pts;
  const auto taus = spec.tau.values();
  const auto kappas = spec.kappa.values();
  pts.reserve(taus.size() * kappas.size());
  for (const double t : taus) {
    for (const double k : kappas) pts.push_back({t, k});
  }
  return pts;
}

// Evaluates pts[first..] on spec.threads workers and hands the rows to
// `sink` strictly in index order.
void evaluate_ordered(const SweepSpec& spec, const std::vector<GridPoint>& pts, std::size_t first,
                      const std::function<void(std::size_t, const SweepRow&)>& sink) {
  const std::size_t n = pts.size();
  const unsigned workers = std::max(1u, spec.threads);
  if (workers == 1 || n - first <= 1) {
    for (std::size_t i = first; i < n; ++i) sink(i, evaluate_point(spec, pts[i].tau, pts[i].kappa));
    return;
  }
  std::vector<std::optional<SweepRow>> slots(n);
  std::atomic<std::size_t> next{first};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable ready;
  auto work = [&] {
    while (!stop) {
      const std::size_t i = next++;
      if (i >= n) return;
      SweepRow row = evaluate_point(spec, pts[i].tau, pts[i].kappa);
      {
        const std::lock_guard lock(mu);
        slots[i] = std::move(row);
      }
      ready.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  try {
    for (std::size_t i = first; i < n; ++i) {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      SweepRow row = std::move(*slots[i]);
      slots[i].reset();
      lock.unlock();
      sink(i, row);
    }
  } catch (...) {
    stop = true;
    throw;
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Leading rows of an earlier CSV at `path` that belong to this grid.
// Everything a row depends on besides its coordinates.
nlohmann::json run_config(const SweepSpec& spec) {
  const auto& ic = spec.options.integration;
  return {{"grid", to_json(spec)},
          {"params", optomech::to_json(spec.base)},
          {"frame", to_string(spec.options.frame)},
          {"integration",
           {{"abs_tol", ic.abs_tol},
            {"rel_tol", ic.rel_tol},
            {"max_intervals", ic.max_intervals},
            {"noise", ic.noise == optomech::ThermalNoise::kMarkov ? "markov" : "brownian"},
            {"drude_cutoff", ic.drude_cutoff}}}};
}

std::string config_path(const std::string& path) { return path + ".run.json"; }

bool same_config(const std::string& path, const nlohmann::json& config) {
  std::ifstream in(config_path(path), std::ios::binary);
  if (!in) return false;
  const nlohmann::json stored = nlohmann::json::parse(in, nullptr, false);
  return !stored.is_discarded() && stored == config;
}

std::vector<std::string> reusable_rows(const std::string& path, const std::vector<GridPoint>& pts,
                                       const nlohmann::json& config) {
  std::vector<std::string> kept;
  std::ifstream in(path, std::ios::binary);
  if (!in) return kept;
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.empty()) return kept;
  std::size_t pos = text.find('\n');
  if (pos == std::string::npos || text.substr(0, pos) != kSweepCsvHeader) {
    throw SchemaError(fmt::format("'{}' exists but is not a sweep CSV with header '{}'", path, kSweepCsvHeader));
  }
  if (!same_config(path, config)) return kept;
  ++pos;
  while (kept.size() < pts.size()) {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) break;  // a torn last line is recomputed
    const std::string line = text.substr(pos, end - pos);
    const auto fields = split(line, ',');
    const GridPoint& g = pts[kept.size()];
    if (fields.size() != 6 || fields[0] != gaussian::format_double(g.tau) ||
        fields[1] != gaussian::format_double(g.kappa)) {
      break;
    }
    kept.push_back(line);
    pos = end + 1;
  }
  return kept;
}

}  // namespace

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    v[i] = log_spaced ? min * std::pow(max / min, u) : min + u * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void Axis::validate() const {
  if (points < 2) throw DomainError(fmt::format("axis {}: need at least 2 points, got {}", name, points));
  if (!(min > 0.0) || !(max > min) || !std::isfinite(max)) {
    throw DomainError(fmt::format("axis {}: need 0 < min < max, got [{}, {}]", name, min, max));
  }
}

void SweepSpec::validate() const {
  tau.validate();
  kappa.validate();
  if (!(tau_ratio > 0.0) || !std::isfinite(tau_ratio)) {
    throw DomainError(fmt::format("tau_ratio must be positive, got {}", tau_ratio));
  }
  base.validate();
}

SweepSpec grid_from_json(const nlohmann::json& j, SweepSpec base) {
  if (!j.is_object()) throw SchemaError("grid file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "tau_b_omega_m" && key != "kappa_over_omega_m" && key != "tau_ratio") {
      throw SchemaError(fmt::format("unknown grid field '{}'", key));
    }
  }
  auto read_axis = [&](const char* key, Axis& axis) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_object()) throw SchemaError(fmt::format("grid field '{}' must be an object", key));
    for (const auto& [k, v] : it->items()) {
      if (k == "min" || k == "max") {
        if (!v.is_number()) throw SchemaError(fmt::format("grid field '{}.{}' must be a number", key, k));
        (k == "min" ? axis.min : axis.max) = v.get<double>();
      } else if (k == "points") {
        if (!v.is_number_unsigned()) {
          throw SchemaError(fmt::format("grid field '{}.points' must be a non-negative integer", key));
        }
        axis.points = v.get<std::size_t>();
      } else if (k == "spacing") {
        if (!v.is_string() || (v != "log" && v != "linear")) {
          throw SchemaError(fmt::format("grid field '{}.spacing' must be \"log\" or \"linear\"", key));
        }
        axis.log_spaced = v == "log";
      } else {
        throw SchemaError(fmt::format("unknown grid field '{}.{}'", key, k));
      }
    }
  };
  read_axis("tau_b_omega_m", base.tau);
  read_axis("kappa_over_omega_m", base.kappa);
  if (const auto it = j.find("tau_ratio"); it != j.end()) {
    if (!it->is_number()) throw SchemaError("grid field 'tau_ratio' must be a number");
    base.tau_ratio = it->get<double>();
  }
  return base;
}

nlohmann::json to_json(const SweepSpec& spec) {
  auto axis = [](const Axis& a) {
    return nlohmann::json{
        {"min", a.min}, {"max", a.max}, {"points", a.points}, {"spacing", a.log_spaced ? "log" : "linear"}};
  };
  return {{"tau_b_omega_m", axis(spec.tau)}, {"kappa_over_omega_m", axis(spec.kappa)}, {"tau_ratio", spec.tau_ratio}};
}

SweepRow evaluate_point(const SweepSpec& spec, double tau_b_omega_m, double kappa_over_omega_m) {
  SweepRow row;
  row.tau_b_omega_m = tau_b_omega_m;
  row.kappa_over_omega_m = kappa_over_omega_m;
  try {
    optomech::OmParams p = spec.base;
    const double wm = p.mech_freq;
    p.mode_b.kappa = kappa_over_omega_m * wm;
    p.mode_c.kappa = kappa_over_omega_m * wm;
    const double tau_b = tau_b_omega_m / wm;
    const optomech::FilterSpec fb{tau_b, -wm};
    const optomech::FilterSpec fc{tau_b / spec.tau_ratio, wm};
    const SiteEvaluation site = evaluate_site(p, fb, fc, spec.options);
    row.en_rr = site.swap.en_rr;
    row.en_cc = site.swap.en_cc;
    row.certifying = site.certifying.certifying;
    row.stable = true;
  } catch (const std::exception& e) {
    row.en_rr = 0.0;
    row.en_cc = 0.0;
    row.certifying = false;
    row.stable = false;
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto pts = grid(spec);
  std::vector<SweepRow> rows(pts.size());
  evaluate_ordered(spec, pts, 0, [&](std::size_t i, const SweepRow& r) { rows[i] = r; });
  return rows;
}

std::string csv_line(const SweepRow& row) {
  using gaussian::format_double;
  return fmt::format("{},{},{},{},{},{}", format_double(row.tau_b_omega_m), format_double(row.kappa_over_omega_m),
                     format_double(row.en_rr), format_double(row.en_cc), row.certifying ? "true" : "false",
                     row.stable ? "true" : "false");
}

nlohmann::json to_json(const SweepRow& row) {
  nlohmann::json j{{"tau_b_omega_m", row.tau_b_omega_m},
                   {"kappa_over_omega_m", row.kappa_over_omega_m},
                   {"en_rr", row.en_rr},
                   {"en_cc", row.en_cc},
                   {"certifying", row.certifying},
                   {"stable", row.stable}};
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

std::size_t sweep_to_csv(const SweepSpec& spec, const std::string& path) {
  spec.validate();
  const auto pts = grid(spec);
  const nlohmann::json config = run_config(spec);
  const std::vector<std::string> kept = reusable_rows(path, pts, config);
  {
    std::ofstream meta(config_path(path), std::ios::binary | std::ios::trunc);
    meta << config.dump(2) << '\n';
    if (!meta) throw IoError(fmt::format("cannot write '{}'", config_path(path)));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << kSweepCsvHeader << '\n';
  for (const auto& line : kept) out << line << '\n';
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));

  evaluate_ordered(spec, pts, kept.size(), [&](std::size_t, const SweepRow& r) {
    out << csv_line(r) << '\n';
    out.flush();
    if (!out) throw IoError(fmt::format("write to '{}' failed", path));
  });
  return pts.size() - kept.size();
}

}  // namespace cvswap::experiments
