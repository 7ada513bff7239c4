#pragma once

#include "pvkit/states.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pvkit {

/// A malformed or inconsistent input file; what() carries field diagnostics.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Vector file: {"shape": [2,2,2],
///               "product_vectors": [{"locals": [[[re,im],...], ...]}, ...],
///               "flat_vectors": [[[re,im], ...], ...],          (optional)
///               "subspace": {"mode": "span"|"complement"}}      (optional)
/// Complex numbers are [re, im] pairs; flat components follow the
/// lexicographic product basis order.
struct VectorFileData {
  PartyShape shape;
  std::vector<ProductVector> product_vectors;
  std::vector<Vector> flat_vectors;
  std::optional<std::string> subspace_mode;
};

VectorFileData parse_vector_file(const nlohmann::json& j, const Tolerance& tol = {});
VectorFileData read_vector_file(const std::string& path, const Tolerance& tol = {});
nlohmann::json vector_file_json(const VectorFileData& data);

/// State file: {"shape": [2,2,2], "matrix": [[re,im], ...]} with d*d entries
/// in row-major order; must parse to a Hermitian matrix.
struct StateFileData {
  HermitianOperator state;
};

StateFileData parse_state_file(const nlohmann::json& j, const Tolerance& tol = {});
StateFileData read_state_file(const std::string& path, const Tolerance& tol = {});
nlohmann::json state_file_json(const HermitianOperator& state);

}  // namespace pvkit
