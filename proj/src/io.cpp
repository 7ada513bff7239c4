#include "pvkit/io.hpp"

#include <fstream>

namespace pvkit {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Vector parse_complex_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where + ": expected a nonempty array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = parse_complex(j[k], where + "[" + std::to_string(k) + "]");
  return v;
}

json complex_list_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_json(v(k)));
  return out;
}

PartyShape parse_shape(const json& j) {
  if (!j.contains("shape")) throw ParseError("missing required field 'shape'");
  const json& s = j["shape"];
  if (!s.is_array() || s.size() < 2)
    throw ParseError("'shape' must be an array of at least two local dimensions");
  std::vector<int> dims;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s[k].is_number_integer())
      throw ParseError("'shape[" + std::to_string(k) + "]' must be an integer");
    dims.push_back(s[k].get<int>());
  }
  try {
    return PartyShape::of(std::move(dims));
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("'shape': ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace

VectorFileData parse_vector_file(const json& j, const Tolerance& tol) {
  if (!j.is_object()) throw ParseError("vector file must be a JSON object");
  VectorFileData data;
  data.shape = parse_shape(j);

  if (j.contains("product_vectors")) {
    const json& pvs = j["product_vectors"];
    if (!pvs.is_array()) throw ParseError("'product_vectors' must be an array");
    for (std::size_t i = 0; i < pvs.size(); ++i) {
      const std::string where = "product_vectors[" + std::to_string(i) + "]";
      if (!pvs[i].is_object() || !pvs[i].contains("locals"))
        throw ParseError(where + ": expected an object with a 'locals' field");
      const json& locs = pvs[i]["locals"];
      if (!locs.is_array() || static_cast<int>(locs.size()) != data.shape.parties())
        throw ParseError(where + ".locals: one local vector per party required");
      std::vector<Vector> locals;
      for (std::size_t p = 0; p < locs.size(); ++p) {
        Vector loc = parse_complex_list(locs[p], where + ".locals[" + std::to_string(p) + "]");
        if (loc.size() != data.shape.dims[p])
          throw ParseError(where + ".locals[" + std::to_string(p) + "]: wrong local dimension");
        locals.push_back(std::move(loc));
      }
      try {
        data.product_vectors.push_back(flatten(std::move(locals), data.shape, tol));
      } catch (const ContractViolation& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
  }

  if (j.contains("flat_vectors")) {
    const json& fvs = j["flat_vectors"];
    if (!fvs.is_array()) throw ParseError("'flat_vectors' must be an array");
    for (std::size_t i = 0; i < fvs.size(); ++i) {
      const std::string where = "flat_vectors[" + std::to_string(i) + "]";
      Vector v = parse_complex_list(fvs[i], where);
      if (v.size() != data.shape.total)
        throw ParseError(where + ": expected " + std::to_string(data.shape.total) + " components");
      if (v.norm() <= tol.residual_abs) throw ParseError(where + ": vector is zero");
      data.flat_vectors.push_back(std::move(v));
    }
  }

  if (data.product_vectors.empty() && data.flat_vectors.empty())
    throw ParseError("vector file contains no vectors");

  if (j.contains("subspace")) {
    const json& sub = j["subspace"];
    if (!sub.is_object() || !sub.contains("mode") || !sub["mode"].is_string())
      throw ParseError("'subspace' must be an object with a string 'mode'");
    const std::string mode = sub["mode"].get<std::string>();
    if (mode != "span" && mode != "complement")
      throw ParseError("'subspace.mode' must be \"span\" or \"complement\"");
    data.subspace_mode = mode;
  }
  return data;
}

VectorFileData read_vector_file(const std::string& path, const Tolerance& tol) {
  return parse_vector_file(load_json_file(path), tol);
}

json vector_file_json(const VectorFileData& data) {
  json j;
  j["shape"] = data.shape.dims;
  if (!data.product_vectors.empty()) {
    json pvs = json::array();
    for (const auto& z : data.product_vectors) {
      json locs = json::array();
      for (const auto& loc : z.locals) locs.push_back(complex_list_json(loc));
      pvs.push_back(json{{"locals", locs}});
    }
    j["product_vectors"] = pvs;
  }
  if (!data.flat_vectors.empty()) {
    json fvs = json::array();
    for (const auto& v : data.flat_vectors) fvs.push_back(complex_list_json(v));
    j["flat_vectors"] = fvs;
  }
  if (data.subspace_mode) j["subspace"] = json{{"mode", *data.subspace_mode}};
  return j;
}

StateFileData parse_state_file(const json& j, const Tolerance& tol) {
  if (!j.is_object()) throw ParseError("state file must be a JSON object");
  StateFileData data;
  data.state.shape = parse_shape(j);
  const int d = data.state.shape.total;

  if (!j.contains("matrix")) throw ParseError("missing required field 'matrix'");
  const json& m = j["matrix"];
  if (!m.is_array() || static_cast<int>(m.size()) != d * d)
    throw ParseError("'matrix' must hold " + std::to_string(d * d) +
                     " row-major [re, im] entries");
  data.state.mat.resize(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      data.state.mat(r, c) = parse_complex(m[static_cast<std::size_t>(r * d + c)],
                                           "matrix[" + std::to_string(r * d + c) + "]");
  const double dev = (data.state.mat - data.state.mat.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol.residual_abs)
    throw ParseError("'matrix' is not Hermitian (max deviation " + std::to_string(dev) + ")");
  return data;
}

StateFileData read_state_file(const std::string& path, const Tolerance& tol) {
  return parse_state_file(load_json_file(path), tol);
}

json state_file_json(const HermitianOperator& state) {
  json j;
  j["shape"] = state.shape.dims;
  json entries = json::array();
  for (Eigen::Index r = 0; r < state.mat.rows(); ++r)
    for (Eigen::Index c = 0; c < state.mat.cols(); ++c)
      entries.push_back(complex_json(state.mat(r, c)));
  j["matrix"] = entries;
  return j;
}

}  // namespace pvkit
