#pragma once

#include "pvkit/states.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pvkit {

/// One labeled product vector with exact Gaussian-integer components per party.
struct ExactProductVector {
  std::string label;
  std::vector<std::vector<std::array<long, 2>>> locals;  // [party][component] = {re, im}
};

/// One labeled flat vector (not necessarily product) with exact components.
struct ExactFlatVector {
  std::string label;
  std::vector<std::array<long, 2>> components;
};

struct Fraction {
  long num = 0;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Expected (size, contains-distinguished) -> (GP, GUPB) verdicts.
struct SubsetTableRow {
  int size;
  bool contains_distinguished;
  bool gp;
  bool gupb;
};

/// A built-in data set together with the facts the rest of the library is
/// expected to reproduce from it.
struct NamedExample {
  std::string name;
  PartyShape shape;
  std::vector<ExactProductVector> product_vectors;
  std::vector<ExactFlatVector> auxiliary_vectors;

  int expected_span_dim = 0;
  std::optional<int> expected_products_in_aux_complement;  // complement of first 3 aux vectors
  std::optional<int> expected_products_in_span;
  std::vector<SubsetTableRow> subset_table;
  std::vector<Fraction> expected_alpha_numerators;     // |a_i|^2 of the normalized expansion
  std::optional<std::vector<long>> expected_dependency;  // z6 = sum dep_i * z_i, unnormalized
  std::optional<ExactProductVector> complement_witness;
  bool expect_gamma_span_degenerate = false;

  std::vector<ProductVector> load_vectors() const;
  std::vector<Vector> load_auxiliary() const;
  std::optional<ProductVector> load_complement_witness() const;
};

/// Names accepted by load_example, in listing order.
std::vector<std::string> example_names();

/// Fixture lookup. "zt-family" takes an optional integer parameter list,
/// e.g. "zt-family:1,2,3,4" (the default); each t gives the vector (1,t)^(x)3.
NamedExample load_example(const std::string& name);

/// The (1,t)^(x)n repeated tensor family for arbitrary real t.
std::vector<ProductVector> zt_family(const std::vector<double>& ts, int parties = 3);

}  // namespace pvkit
