#pragma once

#include "pvkit/types.hpp"

#include <optional>
#include <vector>

namespace pvkit {

/// Number of singular values above rank_rel * sigma_max. Zero matrix has rank 0.
int numeric_rank(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal basis of the null space of m, one column per kernel vector.
/// dim = cols(m) - numeric_rank(m). Columns satisfy ||m * v|| <= residual_abs.
Matrix kernel_basis(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal spanning set of the input columns; column count equals the
/// numeric rank of the input.
Matrix orthonormalize(const Matrix& columns, const Tolerance& tol = {});
Matrix orthonormalize(const std::vector<Vector>& vectors, const Tolerance& tol = {});

/// Full real spectrum of a Hermitian matrix, ascending. Inputs further than
/// residual_abs from Hermitian are rejected.
RealVector hermitian_eigenvalues(const Matrix& m, const Tolerance& tol = {});

struct SpanSolve {
  Vector coeffs;    // least-squares coefficients in the given basis order
  double residual;  // ||basis * coeffs - target||
  bool in_span;     // residual <= residual_abs
};

/// Least-squares expansion of target in a linearly independent set of columns.
/// Throws ContractViolation when the columns are numerically dependent.
SpanSolve solve_in_span(const Matrix& basis_columns, const Vector& target,
                        const Tolerance& tol = {});
SpanSolve solve_in_span(const std::vector<Vector>& basis_vectors, const Vector& target,
                        const Tolerance& tol = {});

/// All complex roots of sum_k coeffs[k] x^k via companion-matrix eigenvalues,
/// each polished by Newton iteration. Returns nullopt for the identically-zero
/// polynomial (every |coeff| <= residual_abs); a nonzero constant has no roots.
std::optional<std::vector<Complex>> univariate_roots(const std::vector<Complex>& coeffs,
                                                     const Tolerance& tol = {});

}  // namespace pvkit
