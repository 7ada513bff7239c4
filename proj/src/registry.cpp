#include "pvkit/registry.hpp"

#include <sstream>

namespace pvkit {

namespace {

using G = std::array<long, 2>;

ExactProductVector pv(std::string label, std::vector<std::vector<G>> locals) {
  return ExactProductVector{std::move(label), std::move(locals)};
}

ExactFlatVector fv(std::string label, std::vector<G> comps) {
  return ExactFlatVector{std::move(label), std::move(comps)};
}

// Shorthands for common qubit locals.
const std::vector<G> E1{{1, 0}, {0, 0}};
const std::vector<G> E2{{0, 0}, {1, 0}};
const std::vector<G> PLUS{{1, 0}, {1, 0}};    // e1 + e2
const std::vector<G> MINUS{{1, 0}, {-1, 0}};  // e1 - e2

NamedExample build_exam_a() {
  NamedExample ex;
  ex.name = "exam-a";
  ex.shape = PartyShape::of({2, 2, 2});
  ex.product_vectors = {
      pv("z1", {E1, E2, PLUS}),
      pv("z2", {E2, PLUS, E1}),
      pv("z3", {PLUS, E1, E2}),
      pv("z4", {MINUS, MINUS, MINUS}),
      pv("z5", {{{2, 0}, {1, 0}}, {{2, 0}, {1, 0}}, {{2, 0}, {1, 0}}}),
      pv("z6", {E1, E1, E1}),
  };
  ex.auxiliary_vectors = {
      fv("w1", {{0, 0}, {0, 0}, {1, 0}, {-1, 0}, {0, 0}, {0, 0}, {0, 0}, {-2, 0}}),
      fv("w2", {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}, {0, 0}, {-1, 0}, {-2, 0}}),
      fv("w3", {{0, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}, {-1, 0}, {0, 0}, {-2, 0}}),
      fv("w4", {{1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}}),
  };
  ex.expected_span_dim = 5;
  ex.expected_products_in_aux_complement = 6;
  ex.expected_products_in_span = 6;
  ex.subset_table = {
      {6, true, false, true},
      {5, false, true, true},
      {5, true, false, true},
      {4, false, true, true},
      {4, true, false, false},
  };
  ex.expected_alpha_numerators = {{2, 9}, {2, 9}, {2, 9}, {8, 81}, {125, 81}};
  return ex;
}

NamedExample build_vec_ex() {
  NamedExample ex;
  ex.name = "vec-ex";
  ex.shape = PartyShape::of({2, 2, 2});
  ex.product_vectors = {
      pv("z1", {E2, {{1, 0}, {2, 0}}, E1}),
      pv("z2", {E2, PLUS, PLUS}),
      pv("z3", {E1, E2, MINUS}),
      pv("z4", {PLUS, E2, PLUS}),
      pv("z5", {{{1, 0}, {2, 0}}, E1, E2}),
      pv("z6", {PLUS, {{1, 0}, {-2, 0}}, E2}),
  };
  ex.expected_span_dim = 5;
  ex.expected_products_in_span = 6;
  ex.expected_alpha_numerators = {{1, 2}, {2, 5}, {1, 5}, {2, 5}, {1, 2}};
  ex.expected_dependency = std::vector<long>{1, -1, 1, -1, 1};
  ex.complement_witness = pv("e111", {E1, E1, E1});
  return ex;
}

NamedExample build_w_family() {
  NamedExample ex;
  ex.name = "w-family";
  ex.shape = PartyShape::of({2, 2, 2});
  ex.product_vectors = {
      pv("w1", {PLUS, PLUS, PLUS}),
      pv("w2", {{{1, 0}, {0, 1}}, MINUS, {{1, 0}, {0, -1}}}),
      pv("w3", {MINUS, PLUS, MINUS}),
      pv("w4", {{{1, 0}, {0, -1}}, MINUS, {{1, 0}, {0, 1}}}),
      pv("w5", {E1, E1, E1}),
      pv("w6", {E2, E1, E2}),
  };
  ex.expected_span_dim = 5;
  ex.expected_products_in_span = 6;
  ex.expect_gamma_span_degenerate = true;
  return ex;
}

NamedExample build_zt_family(const std::vector<long>& ts) {
  NamedExample ex;
  ex.name = "zt-family";
  ex.shape = PartyShape::of({2, 2, 2});
  for (long t : ts) {
    std::vector<G> local{{1, 0}, {t, 0}};
    std::ostringstream label;
    label << "z_t" << t;
    ex.product_vectors.push_back(pv(label.str(), {local, local, local}));
  }
  ex.expected_span_dim = static_cast<int>(std::min<std::size_t>(ts.size(), 4));
  return ex;
}

Vector to_vector(const std::vector<G>& comps) {
  Vector v(static_cast<Eigen::Index>(comps.size()));
  for (std::size_t k = 0; k < comps.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = Complex(static_cast<double>(comps[k][0]),
                                              static_cast<double>(comps[k][1]));
  return v;
}

ProductVector to_product(const ExactProductVector& e, const PartyShape& shape) {
  std::vector<Vector> locals;
  locals.reserve(e.locals.size());
  for (const auto& loc : e.locals) locals.push_back(to_vector(loc));
  return flatten(std::move(locals), shape);
}

}  // namespace

std::vector<ProductVector> NamedExample::load_vectors() const {
  std::vector<ProductVector> out;
  out.reserve(product_vectors.size());
  for (const auto& e : product_vectors) out.push_back(to_product(e, shape));
  return out;
}

std::vector<Vector> NamedExample::load_auxiliary() const {
  std::vector<Vector> out;
  out.reserve(auxiliary_vectors.size());
  for (const auto& e : auxiliary_vectors) out.push_back(to_vector(e.components));
  return out;
}

std::optional<ProductVector> NamedExample::load_complement_witness() const {
  if (!complement_witness) return std::nullopt;
  return to_product(*complement_witness, shape);
}

std::vector<std::string> example_names() {
  return {"exam-a", "vec-ex", "w-family", "zt-family"};
}

NamedExample load_example(const std::string& name) {
  if (name == "exam-a") return build_exam_a();
  if (name == "vec-ex") return build_vec_ex();
  if (name == "w-family") return build_w_family();
  if (name == "zt-family") return build_zt_family({1, 2, 3, 4});
  if (name.rfind("zt-family:", 0) == 0) {
    std::vector<long> ts;
    std::istringstream args(name.substr(std::string("zt-family:").size()));
    std::string item;
    while (std::getline(args, item, ',')) {
      try {
        ts.push_back(std::stol(item));
      } catch (const std::exception&) {
        throw ContractViolation("load_example: bad zt-family parameter '" + item + "'");
      }
    }
    if (ts.empty()) throw ContractViolation("load_example: zt-family needs parameters");
    return build_zt_family(ts);
  }
  throw ContractViolation("load_example: unknown example '" + name + "'");
}

std::vector<ProductVector> zt_family(const std::vector<double>& ts, int parties) {
  if (parties < 2) throw ContractViolation("zt_family: need at least two parties");
  std::vector<ProductVector> out;
  const PartyShape shape = PartyShape::of(std::vector<int>(static_cast<std::size_t>(parties), 2));
  for (double t : ts) {
    Vector local(2);
    local << Complex(1.0, 0.0), Complex(t, 0.0);
    out.push_back(flatten(std::vector<Vector>(static_cast<std::size_t>(parties), local), shape));
  }
  return out;
}

}  // namespace pvkit
