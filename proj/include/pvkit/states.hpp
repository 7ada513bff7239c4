#pragma once

#include "pvkit/types.hpp"

#include <vector>

namespace pvkit {

/// Local dimensions (d_1, ..., d_n) of a multipartite space, n >= 2, d_i >= 2.
/// Composite indices are mixed-radix with party 0 most significant, matching
/// the lexicographic ordering of the product basis.
struct PartyShape {
  std::vector<int> dims;
  int total = 0;

  static PartyShape of(std::vector<int> dims);

  int parties() const { return static_cast<int>(dims.size()); }
  bool all_qubits() const;
  bool operator==(const PartyShape& o) const { return dims == o.dims; }
};

/// Mixed-radix digit helpers for composite indices.
std::vector<int> composite_digits(int index, const PartyShape& shape);
int composite_index(const std::vector<int>& digits, const PartyShape& shape);

/// A product vector: one nonzero local vector per party plus the flattened
/// tensor in lexicographic basis order. The two representations are kept
/// consistent: flat == locals[0] (x) locals[1] (x) ... within residual_abs.
struct ProductVector {
  PartyShape shape;
  std::vector<Vector> locals;
  Vector flat;
};

/// A d x d Hermitian operator on the composite space.
struct HermitianOperator {
  PartyShape shape;
  Matrix mat;

  double trace() const { return mat.trace().real(); }
};

/// Tensor product of the locals in lexicographic basis order.
ProductVector flatten(std::vector<Vector> locals, const PartyShape& shape,
                      const Tolerance& tol = {});

/// Unit-norm copy with a fixed phase: each local is normalized and rotated so
/// its first nonzero component is real positive, which makes the first nonzero
/// flat component real positive as well.
ProductVector canonical_normalized(const ProductVector& z);

/// |<a|b>|^2 for unit-normalized flats; 1 means projectively equal.
double projective_fidelity(const ProductVector& a, const ProductVector& b);
bool projectively_equal(const ProductVector& a, const ProductVector& b,
                        const Tolerance& tol = {});

/// Rank-one projector |z><z| of a normalized product vector.
HermitianOperator pure_state(const ProductVector& z, const Tolerance& tol = {});

/// Convex combination sum_i weights[i] * states[i].
HermitianOperator mix(const std::vector<HermitianOperator>& states,
                      const RealVector& weights, const Tolerance& tol = {});

/// Partial transpose over the given 0-based parties: row and column digits are
/// swapped exactly on those tensor factors. Involution; preserves Hermiticity
/// and trace.
Matrix partial_transpose(const Matrix& mat, const PartyShape& shape,
                         const std::vector<int>& parties);
HermitianOperator partial_transpose(const HermitianOperator& rho,
                                    const std::vector<int>& parties);

/// Entrywise conjugation of the locals on the given 0-based parties.
ProductVector partial_conjugate(const ProductVector& z, const std::vector<int>& parties);

/// Merge two adjacent parties (first, first+1) into one party whose local is
/// the tensor product of the two locals. The flat vector is unchanged.
ProductVector regroup(const ProductVector& z, int first, int second);

}  // namespace pvkit
