#pragma once

#include "pvkit/states.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pvkit {

/// The six-vector configuration is outside the regime where the boundary
/// construction applies: the mixing coefficients give S <= 1.
class NoPptBoundary : public std::runtime_error {
 public:
  explicit NoPptBoundary(const std::string& what) : std::runtime_error(what) {}
};

/// Some set of partial conjugates of the six vectors spans more than five
/// dimensions, so following the boundary cannot produce a PPT entangled state.
class DegenerateGammaSpan : public std::runtime_error {
 public:
  explicit DegenerateGammaSpan(const std::string& what) : std::runtime_error(what) {}
};

/// Six normalized three-qubit product vectors spanning a 5-dimensional
/// subspace, every five of them independent, pairwise projectively distinct.
/// The distinguished vector plays the expanded role (default: the last).
struct SixTuple {
  std::array<ProductVector, 6> vectors;
  int distinguished = 5;  // 0-based

  static SixTuple make(const std::vector<ProductVector>& vs, int distinguished = 5,
                       const Tolerance& tol = {});

  const ProductVector& special() const { return vectors[static_cast<std::size_t>(distinguished)]; }
  /// The five non-distinguished vectors in input order.
  std::vector<ProductVector> others() const;
};

/// Coefficients a with special = sum_i a_i * others()[i].
Vector expansion_coefficients(const SixTuple& six, const Tolerance& tol = {});

/// S = sum |a_i|^2 / p_i.
double alpha_sum(const Vector& a, const RealVector& p);

/// The PPT boundary parameter lambda = S / (S - 1), the positive solution of
/// (1 - lambda) * S + lambda = 0. Requires S > 1.
double boundary_lambda(const Vector& a, const RealVector& p, const Tolerance& tol = {});

/// Ranks of the partially conjugated six-vector families for each single party.
std::array<int, 3> gamma_span_dims(const SixTuple& six, const Tolerance& tol = {});

struct BoundaryData {
  Vector a;      // 5 expansion coefficients
  RealVector p;  // 5 weights
  double S = 0.0;
  double lambda = 0.0;
};

struct BuildResult {
  HermitianOperator rho;
  BoundaryData data;
  std::array<int, 3> gamma_dims{};
};

/// The boundary state rho = (1 - lambda)|z6><z6| + lambda * sum_i p_i |z_i><z_i|.
/// Validates the gamma-span precondition, cross-checks the equivalent
/// alpha form entrywise, and audits the analytic lambda against a PPT
/// bisection; any disagreement beyond 1e-6 is an error.
BuildResult build_rho(const SixTuple& six, const RealVector& p, const Tolerance& tol = {});

enum class PptesVerdict { pptes_edge_rank4, separable, inconclusive };

struct PptesReport {
  std::array<int, 4> ranks{};        // of rho^T(j), j = 0 (identity), 1, 2, 3
  std::array<double, 4> min_eigs{};  // smallest eigenvalue of each transpose
  int range_products = 0;
  int kernel_products = 0;
  bool range_products_infinite = false;
  bool kernel_products_infinite = false;
  std::optional<std::array<int, 3>> gamma_span_dims;  // filled by the build path
  PptesVerdict verdict = PptesVerdict::inconclusive;
};

/// Partially transposes a trace-one Hermitian three-qubit operator in all four
/// inequivalent ways, enumerates product vectors in its range and kernel, and
/// classifies: a rank-4 PPT state with product-free range is an entangled edge
/// state; a rank-4 PPT state with a product vector in the range is separable.
PptesReport verify_pptes(const HermitianOperator& rho, const Tolerance& tol = {});

/// Numeric audit of the boundary: bisects the largest t with rho_t PPT.
double lambda_bisection_check(const SixTuple& six, const RealVector& p,
                              const Tolerance& tol = {});

}  // namespace pvkit
