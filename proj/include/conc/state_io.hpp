#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "conc/states.hpp"
#include "conc/types.hpp"

namespace conc {

// ---------------------------------------------------------------------------
// State files: UTF-8 text holding one object
//   { "dims": [n1, n2], "matrix": [ [ [re, im], ... ], ... ] }
// Rows are row-major; numbers are decimal literals (shortest round-trip
// representation, at most 17 significant digits), so save -> load is exact.
// Structural problems raise ParseError; a well-formed file whose matrix is not
// a density matrix raises a ValidationError subclass.
// ---------------------------------------------------------------------------

inline void save_state(const DensityMatrix& rho, const std::string& path) {
  nlohmann::json j;
  j["dims"] = {rho.dims.n1, rho.dims.n2};
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < rho.matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < rho.matrix.cols(); ++k) {
      row.push_back({rho.matrix(i, k).real(), rho.matrix(i, k).imag()});
    }
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw ParseError("save_state: cannot open '" + path + "' for writing");
  out << j.dump(1) << "\n";
  if (!out) throw ParseError("save_state: write to '" + path + "' failed");
}

inline DensityMatrix load_state(const std::string& path, double tol = 1e-9) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_state: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("load_state: '" + path + "' is not valid JSON: " + e.what());
  }

  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw ParseError("load_state: missing 'dims' or 'matrix' field");
  const nlohmann::json& jd = j["dims"];
  if (!jd.is_array() || jd.size() != 2 || !jd[0].is_number_integer() || !jd[1].is_number_integer())
    throw ParseError("load_state: 'dims' must be [n1, n2]");
  BipartiteDims dims{jd[0].get<int>(), jd[1].get<int>()};
  if (dims.n1 < 1 || dims.n2 < 1) throw ParseError("load_state: dims must be positive");

  const nlohmann::json& jm = j["matrix"];
  if (!jm.is_array() || jm.empty()) throw ParseError("load_state: 'matrix' must be a non-empty array");
  const std::size_t nrows = jm.size();
  ComplexMatrix M(static_cast<int>(nrows), static_cast<int>(nrows));
  for (std::size_t i = 0; i < nrows; ++i) {
    const nlohmann::json& row = jm[i];
    if (!row.is_array() || row.size() != nrows)
      throw ParseError("load_state: 'matrix' rows must all have length equal to the row count");
    for (std::size_t k = 0; k < nrows; ++k) {
      const nlohmann::json& cell = row[k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ParseError("load_state: matrix entries must be [re, im] pairs");
      M(static_cast<int>(i), static_cast<int>(k)) =
          Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  if (static_cast<int>(nrows) != dims.total())
    throw ParseError("load_state: matrix is " + std::to_string(nrows) + "x" +
                     std::to_string(nrows) + " but dims give " + std::to_string(dims.total()));

  return validate(M, dims, tol);
}

}  // namespace conc
