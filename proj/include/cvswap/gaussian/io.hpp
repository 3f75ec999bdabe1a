#pragma once

#include "cvswap/gaussian/cov_matrix.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cvswap::gaussian {

/// CM serialization:
///   {"n_modes": n, "ordering": "xpxp", "vacuum_variance": 0.5,
///    "data": [row-major 2n x 2n], "labels": [...]?, "mean": [...]?}
nlohmann::json to_json(const CovMatrix& v, const std::vector<std::string>& labels = {});
nlohmann::json to_json(const ThreeModeState& s, const std::vector<std::string>& labels = {});

/// Parse the schema above. Throws SchemaError naming the offending field.
CovMatrix cm_from_json(const nlohmann::json& j);

/// Three-mode state; "mean" defaults to zero.
ThreeModeState state_from_json(const nlohmann::json& j);

/// Optional "labels" array, empty when absent.
std::vector<std::string> labels_from_json(const nlohmann::json& j);

/// One line per row, comma separated, shortest round-trip digits.
std::string to_csv(const CovMatrix& v);

/// Shortest round-trip decimal formatting used by every text artifact.
std::string format_double(double x);

}  // namespace cvswap::gaussian
