#include "cvswap/gaussian/io.hpp"

#include "cvswap/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

namespace cvswap::gaussian {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* field) {
  if (!j.is_object()) throw SchemaError("covariance matrix JSON must be an object");
  const auto it = j.find(field);
  if (it == j.end()) throw SchemaError(fmt::format("missing field '{}'", field));
  return *it;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{}", x); }

nlohmann::json to_json(const CovMatrix& v, const std::vector<std::string>& labels) {
  nlohmann::json j;
  j["n_modes"] = v.modes();
  j["ordering"] = "xpxp";
  j["vacuum_variance"] = kVacuumVariance;
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(v.matrix().size()));
  for (Eigen::Index r = 0; r < v.matrix().rows(); ++r) {
    for (Eigen::Index c = 0; c < v.matrix().cols(); ++c) data.push_back(v.matrix()(r, c));
  }
  j["data"] = std::move(data);
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

nlohmann::json to_json(const ThreeModeState& s, const std::vector<std::string>& labels) {
  nlohmann::json j = to_json(s.cm(), labels);
  if (!s.mean().isZero(0.0)) {
    j["mean"] = std::vector<double>(s.mean().data(), s.mean().data() + 6);
  }
  return j;
}

CovMatrix cm_from_json(const nlohmann::json& j) {
  const auto& n_field = require(j, "n_modes");
  if (!n_field.is_number_integer() || n_field.get<long long>() <= 0) {
    throw SchemaError("field 'n_modes' must be a positive integer");
  }
  const auto n = n_field.get<long long>();

  const auto& ordering = require(j, "ordering");
  if (!ordering.is_string() || ordering.get<std::string>() != "xpxp") {
    throw SchemaError("field 'ordering' must be \"xpxp\"");
  }
  const auto& vac = require(j, "vacuum_variance");
  if (!vac.is_number() || vac.get<double>() != kVacuumVariance) {
    throw SchemaError("field 'vacuum_variance' must be 0.5");
  }
  const auto& data = require(j, "data");
  const auto dim = 2 * n;
  if (!data.is_array() || static_cast<long long>(data.size()) != dim * dim) {
    throw SchemaError(fmt::format("field 'data' must be an array of {} numbers", dim * dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (long long k = 0; k < dim * dim; ++k) {
    const auto& x = data[static_cast<std::size_t>(k)];
    if (!x.is_number()) throw SchemaError(fmt::format("field 'data[{}]' is not a number", k));
    m(k / dim, k % dim) = x.get<double>();
  }
  try {
    return CovMatrix(std::move(m));
  } catch (const Error& e) {
    throw SchemaError(fmt::format("field 'data': {}", e.what()));
  }
}

ThreeModeState state_from_json(const nlohmann::json& j) {
  CovMatrix cm = cm_from_json(j);
  if (cm.modes() != 3) {
    throw SchemaError(fmt::format("field 'n_modes' must be 3 for a three-mode state, got {}", cm.modes()));
  }
  Eigen::Matrix<double, 6, 1> mean = Eigen::Matrix<double, 6, 1>::Zero();
  if (const auto it = j.find("mean"); it != j.end()) {
    if (!it->is_array() || it->size() != 6) throw SchemaError("field 'mean' must be an array of 6 numbers");
    for (std::size_t k = 0; k < 6; ++k) {
      if (!(*it)[k].is_number()) throw SchemaError(fmt::format("field 'mean[{}]' is not a number", k));
      mean(static_cast<Eigen::Index>(k)) = (*it)[k].get<double>();
    }
  }
  return ThreeModeState(std::move(cm), mean);
}

std::vector<std::string> labels_from_json(const nlohmann::json& j) {
  std::vector<std::string> out;
  if (const auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("field 'labels' must be an array of strings");
    for (const auto& l : *it) {
      if (!l.is_string()) throw SchemaError("field 'labels' must be an array of strings");
      out.push_back(l.get<std::string>());
    }
  }
  return out;
}

std::string to_csv(const CovMatrix& v) {
  std::string out;
  const auto& m = v.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace cvswap::gaussian
