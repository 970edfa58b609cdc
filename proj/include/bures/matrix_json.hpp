#ifndef BURES_MATRIX_JSON_HPP
#define BURES_MATRIX_JSON_HPP

#include <string>

#include <json.hpp>

#include "bures/operator_core.hpp"

namespace bures {

/// Wire format shared by every module:
/// {"rows": n, "cols": m, "data": [[re, im], ...]} row-major; density
/// matrices additionally carry {"kind": "density"}.
inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return nlohmann::json{
      {"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline nlohmann::json density_to_json(const DensityMatrix& dm) {
  nlohmann::json j = matrix_to_json(dm.matrix);
  j["kind"] = "density";
  return j;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw Error("BadMatrixJson",
                "matrix JSON needs rows, cols and data fields");
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1 ||
      data.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error("BadMatrixJson", "data length does not match rows*cols");
  }
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++idx) {
      const auto& entry = data.at(idx);
      if (!entry.is_array() || entry.size() != 2) {
        throw Error("BadMatrixJson", "entries must be [re, im] pairs");
      }
      m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

inline DensityMatrix density_from_json(const nlohmann::json& j,
                                       double tol_rank = tol::rank_rel) {
  return validate_density(matrix_from_json(j), tol_rank);
}

}  // namespace bures

#endif  // BURES_MATRIX_JSON_HPP
