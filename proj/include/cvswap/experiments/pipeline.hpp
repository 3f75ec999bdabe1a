#pragma once

#include "cvswap/gaussian/entanglement.hpp"
#include "cvswap/gaussian/standard_form.hpp"
#include "cvswap/optomech/params.hpp"
#include "cvswap/optomech/spectral.hpp"
#include "cvswap/swap/bell_swap.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace cvswap::experiments {

/// Local frame of the Bell mode at both sites before the measurement.
enum class BellFrame {
  /// Each site squeezes R, B, C to scalar blocks and rotates B and C so that
  /// E is diagonal. The C1C2 verdict then matches the purity criterion.
  kCertification,
  /// Measure the output quadratures as they come, in the drive frame.
  kDrive,
};

std::string to_string(BellFrame f);
/// Accepts "certification" or "drive"; throws SchemaError otherwise.
BellFrame bell_frame_from_string(const std::string& s);

struct PipelineOptions {
  optomech::IntegrationConfig integration;
  BellFrame frame = BellFrame::kCertification;
  std::size_t rounds = 10;
  std::uint64_t seed = 0;
};

/// One optomechanical site swapped with an identical copy of itself.
struct SiteEvaluation {
  gaussian::ThreeModeState output;    ///< (mech, out_b, out_c) in the drive frame
  gaussian::ThreeModeState measured;  ///< state entering the Bell measurement
  gaussian::CertifyingReport certifying;
  swap::SwapResult swap;
  optomech::SpectralDiagnostics diagnostics;
};

/// Throws StabilityError, IntegrationError or MeasurementDegenerate.
SiteEvaluation evaluate_site(const optomech::OmParams& params, const optomech::FilterSpec& filter_b,
                             const optomech::FilterSpec& filter_c, const PipelineOptions& options);

/// Report with the stationary CM, purities, certifying verdict, swap E_N
/// values and the sampled protocol rounds. Same inputs give the same JSON.
nlohmann::json run_pipeline(const optomech::OmParams& params, const optomech::FilterSpec& filter_b,
                            const optomech::FilterSpec& filter_c, const PipelineOptions& options);

}  // namespace cvswap::experiments
