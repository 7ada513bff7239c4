#pragma once

#include "pvkit/linalg.hpp"
#include "pvkit/states.hpp"

#include <vector>

namespace pvkit {

/// Polynomial of degree <= 1 in each of m variables. coeffs[mask] multiplies
/// the monomial with x_v present exactly when bit v of mask is set.
struct MultilinearPoly {
  int vars = 0;
  std::vector<Complex> coeffs;  // size 2^vars

  static MultilinearPoly zero(int vars);
  Complex eval(const std::vector<Complex>& x) const;
  double max_coeff() const;
};

enum class EnumerationKind { finite, infinite };

struct EnumerationResult {
  EnumerationKind kind = EnumerationKind::finite;
  std::vector<ProductVector> vectors;  // canonical, sorted; empty when infinite
  int charts_visited = 0;
  double residual_max = 0.0;
};

/// All product vectors of a subspace of a 2- or 3-qubit space, up to scalars.
///
/// The subspace is given by an orthonormal basis (one column per vector). Each
/// of the 2^n charts fixes every party's local to (1, x) or (0, 1); the
/// complement constraints <w_k|z> = 0 become multilinear polynomials in the
/// chart unknowns, which are eliminated down to a univariate polynomial
/// (cross-determinants, then a Sylvester resultant for three unknowns). Roots
/// are back-substituted, Newton-refined on the full system, checked against
/// every constraint, then deduplicated projectively across charts. A chart
/// whose eliminant vanishes identically is tested by sampling; three
/// independent on-component samples certify an infinite family.
EnumerationResult enumerate_in_subspace(const Matrix& basis, const PartyShape& shape,
                                        const Tolerance& tol = {});

/// Validation oracle: seeds Gauss-Newton on the full constraint system from a
/// coarse grid (grid_density points per real axis) over the same charts and
/// collects converged solutions. Supports 2-, 3- and 4-qubit shapes; best
/// effort, no infinite-family detection.
std::vector<ProductVector> oracle_grid_search(const Matrix& basis, const PartyShape& shape,
                                              int grid_density = 8, const Tolerance& tol = {});

/// ||z - P z|| / ||z|| with P the orthogonal projector onto the subspace.
double membership_residual(const ProductVector& z, const Matrix& basis);

}  // namespace pvkit
