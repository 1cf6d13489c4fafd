// JSON matrix interchange used by every CLI command:
//   {"dims":[n1,...,ns], "re":[[...]], "im":[[...]]}
// Hermiticity is validated on load: symmetrized when the asymmetry is within
// 1e-12, rejected beyond. "im" may be omitted for real matrices.

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "reecss/linalg.hpp"

namespace reecss {

using Json = nlohmann::json;

inline Json matrix_to_json(const HermitianMatrix& m) {
  const Index n = m.order();
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < n; ++i) {
    Json rrow = Json::array(), irow = Json::array();
    for (Index j = 0; j < n; ++j) {
      rrow.push_back(m.mat()(i, j).real());
      irow.push_back(m.mat()(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  Json out;
  out["dims"] = Json::array();
  for (Index d : m.dims()) out["dims"].push_back(d);
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

inline HermitianMatrix matrix_from_json(const Json& j) {
  if (!j.contains("dims") || !j.contains("re"))
    throw DomainError("matrix JSON must contain \"dims\" and \"re\"");
  Dims dims;
  for (const auto& d : j.at("dims")) dims.push_back(d.get<Index>());
  const Index n = dims_product(dims);
  const Json& re = j.at("re");
  const bool has_im = j.contains("im");
  if (static_cast<Index>(re.size()) != n)
    throw DimensionError("matrix JSON: \"re\" must have product(dims) rows");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const Json& rrow = re.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(rrow.size()) != n)
      throw DimensionError("matrix JSON: row length mismatch in \"re\"");
    for (Index jx = 0; jx < n; ++jx) {
      double rv = rrow.at(static_cast<std::size_t>(jx)).get<double>();
      double iv = 0.0;
      if (has_im) iv = j.at("im").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(jx)).get<double>();
      m(i, jx) = Complex(rv, iv);
    }
  }
  double asym = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index jx = 0; jx < n; ++jx)
      asym = std::max(asym, std::abs(m(i, jx) - std::conj(m(jx, i))));
  if (asym > tol::herm_sym)
    throw DomainError("matrix JSON is not hermitian: max |m - m^dag| entry = " +
                      std::to_string(asym) + " exceeds 1e-12");
  return HermitianMatrix(std::move(dims), std::move(m));
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open for reading: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_matrix_file(const std::string& path, const HermitianMatrix& m) {
  write_json_file(path, matrix_to_json(m));
}

inline HermitianMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

inline DensityMatrix read_density_file(const std::string& path) {
  return DensityMatrix(read_matrix_file(path));
}

}  // namespace reecss
