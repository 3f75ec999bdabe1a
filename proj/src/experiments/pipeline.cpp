#include "cvswap/experiments/pipeline.hpp"

#include "cvswap/errors.hpp"
#include "cvswap/gaussian/io.hpp"
#include "cvswap/optomech/model.hpp"
#include "cvswap/swap/protocol.hpp"

#include <fmt/format.h>

namespace cvswap::experiments {

std::string to_string(BellFrame f) { return f == BellFrame::kCertification ? "certification" : "drive"; }

BellFrame bell_frame_from_string(const std::string& s) {
  if (s == "certification") return BellFrame::kCertification;
  if (s == "drive") return BellFrame::kDrive;
  throw SchemaError(fmt::format("frame must be 'certification' or 'drive', got '{}'", s));
}

SiteEvaluation evaluate_site(const optomech::OmParams& params, const optomech::FilterSpec& filter_b,
                             const optomech::FilterSpec& filter_c, const PipelineOptions& options) {
  const optomech::LinearModel model = optomech::build_linear_model(params);
  optomech::SpectralDiagnostics diag;
  gaussian::ThreeModeState out = optomech::output_cm(model, filter_b, filter_c, options.integration, &diag);
  gaussian::ThreeModeState measured =
      options.frame == BellFrame::kCertification
          ? gaussian::align_frame(out, gaussian::AlignTarget::kCertification).state
          : out;
  gaussian::CertifyingReport cert = gaussian::is_certifying(out);
  swap::SwapResult sw = swap::bell_swap(measured, measured);
  return {std::move(out), std::move(measured), cert, std::move(sw), diag};
}

nlohmann::json run_pipeline(const optomech::OmParams& params, const optomech::FilterSpec& filter_b,
                            const optomech::FilterSpec& filter_c, const PipelineOptions& options) {
  const SiteEvaluation site = evaluate_site(params, filter_b, filter_c, options);
  const swap::ProtocolRun run = swap::run_protocol(site.measured, site.measured, options.rounds, options.seed);

  const std::vector<std::string> labels{"mech", "out_b", "out_c"};
  const auto& p = site.certifying.purities;
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : run.rounds) {
    rounds.push_back({{"round", r.round},
                      {"x_minus", r.outcome.x_minus},
                      {"p_plus", r.outcome.p_plus},
                      {"d_r1", {r.d_r1(0), r.d_r1(1)}},
                      {"d_r2", {r.d_r2(0), r.d_r2(1)}},
                      {"certified", r.certified}});
  }
  return {{"params", optomech::to_json(params)},
          {"filter_b", optomech::to_json(filter_b)},
          {"filter_c", optomech::to_json(filter_c)},
          {"stationary_cm", gaussian::to_json(site.output, labels)},
          {"purities", {{"rb", p.mu_rb}, {"bc", p.mu_bc}, {"b", p.mu_b}, {"c", p.mu_c}}},
          {"certifying", site.certifying.certifying},
          {"margins", {{"rb_bc", site.certifying.margin_rb_bc}, {"bc_b", site.certifying.margin_bc_b}}},
          {"frame", to_string(options.frame)},
          {"measured_cm", gaussian::to_json(site.measured, labels)},
          {"swap", swap::to_json(site.swap)},
          {"protocol", {{"seed", options.seed}, {"certified", run.certified}, {"rounds", rounds}}},
          {"integration",
           {{"intervals", site.diagnostics.intervals},
            {"evaluations", site.diagnostics.evaluations},
            {"max_error", site.diagnostics.max_error},
            {"window_omega_m", site.diagnostics.window}}}};
}

}  // namespace cvswap::experiments
