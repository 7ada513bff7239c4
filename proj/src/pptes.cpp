#include "pvkit/pptes.hpp"

#include "pvkit/enumerate.hpp"
#include "pvkit/linalg.hpp"
#include "pvkit/position.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace pvkit {

namespace {

const std::vector<std::vector<int>> kTransposeSubsets{{}, {0}, {1}, {2}};

void require_weights(const RealVector& p, const Tolerance& tol) {
  if (p.size() != 5) throw ContractViolation("five weights required");
  if (p.minCoeff() <= 0.0) throw ContractViolation("weights must be positive");
  if (std::abs(p.sum() - 1.0) > tol.residual_abs)
    throw ContractViolation("weights must sum to 1");
}

Matrix six_flat_columns(const SixTuple& six) {
  Matrix cols(8, 6);
  for (int i = 0; i < 6; ++i) cols.col(i) = six.vectors[static_cast<std::size_t>(i)].flat;
  return cols;
}

HermitianOperator rho_t(const SixTuple& six, const RealVector& p, double t) {
  const ProductVector& z6 = six.special();
  const auto others = six.others();
  Matrix mat = (1.0 - t) * (z6.flat * z6.flat.adjoint());
  for (int i = 0; i < 5; ++i)
    mat += t * p(i) * (others[static_cast<std::size_t>(i)].flat *
                       others[static_cast<std::size_t>(i)].flat.adjoint());
  HermitianOperator rho;
  rho.shape = z6.shape;
  rho.mat = std::move(mat);
  return rho;
}

bool is_ppt_at(const SixTuple& six, const RealVector& p, double t, const Tolerance& tol) {
  const HermitianOperator rho = rho_t(six, p, t);
  for (const auto& subset : kTransposeSubsets) {
    const Matrix pt = partial_transpose(rho.mat, rho.shape, subset);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol.psd_abs) return false;
  }
  return true;
}

}  // namespace

SixTuple SixTuple::make(const std::vector<ProductVector>& vs, int distinguished,
                        const Tolerance& tol) {
  if (vs.size() != 6) throw ContractViolation("SixTuple: exactly six product vectors required");
  if (distinguished < 0 || distinguished > 5)
    throw ContractViolation("SixTuple: distinguished index out of range");
  for (const auto& v : vs)
    if (!(v.shape == PartyShape::of({2, 2, 2})))
      throw ContractViolation("SixTuple: vectors must live on three qubits");

  SixTuple six;
  six.distinguished = distinguished;
  std::vector<ProductVector> normalized;
  normalized.reserve(6);
  for (int i = 0; i < 6; ++i) {
    six.vectors[static_cast<std::size_t>(i)] = canonical_normalized(vs[static_cast<std::size_t>(i)]);
    normalized.push_back(six.vectors[static_cast<std::size_t>(i)]);
  }

  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (projectively_equal(normalized[static_cast<std::size_t>(i)],
                             normalized[static_cast<std::size_t>(j)], tol))
        throw ContractViolation("SixTuple: vectors must be pairwise projectively distinct");

  if (numeric_rank(six_flat_columns(six), tol) != 5)
    throw ContractViolation("SixTuple: the six vectors must span exactly five dimensions");
  if (!five_subset_independence(normalized, tol))
    throw ContractViolation("SixTuple: some five-vector subset is linearly dependent");
  return six;
}

std::vector<ProductVector> SixTuple::others() const {
  std::vector<ProductVector> out;
  out.reserve(5);
  for (int i = 0; i < 6; ++i)
    if (i != distinguished) out.push_back(vectors[static_cast<std::size_t>(i)]);
  return out;
}

Vector expansion_coefficients(const SixTuple& six, const Tolerance& tol) {
  const auto others = six.others();
  std::vector<Vector> basis;
  basis.reserve(5);
  for (const auto& v : others) basis.push_back(v.flat);
  const SpanSolve solve = solve_in_span(basis, six.special().flat, tol);
  if (!solve.in_span)
    throw ContractViolation("expansion_coefficients: distinguished vector is not in the span");
  return solve.coeffs;
}

double alpha_sum(const Vector& a, const RealVector& p) {
  if (a.size() != 5 || p.size() != 5)
    throw ContractViolation("alpha_sum: five coefficients and five weights required");
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += std::norm(a(i)) / p(i);
  return s;
}

double boundary_lambda(const Vector& a, const RealVector& p, const Tolerance& tol) {
  require_weights(p, tol);
  const double S = alpha_sum(a, p);
  if (S <= 1.0 + tol.residual_abs)
    throw NoPptBoundary("boundary_lambda: S <= 1, the line never leaves the PPT set");
  return S / (S - 1.0);
}

std::array<int, 3> gamma_span_dims(const SixTuple& six, const Tolerance& tol) {
  std::array<int, 3> dims{};
  for (int j = 0; j < 3; ++j) {
    Matrix cols(8, 6);
    for (int i = 0; i < 6; ++i)
      cols.col(i) = partial_conjugate(six.vectors[static_cast<std::size_t>(i)], {j}).flat;
    dims[static_cast<std::size_t>(j)] = numeric_rank(cols, tol);
  }
  return dims;
}

double lambda_bisection_check(const SixTuple& six, const RealVector& p, const Tolerance& tol) {
  require_weights(p, tol);
  if (!is_ppt_at(six, p, 1.0, tol))
    throw ContractViolation("lambda_bisection_check: the separable mixture at t = 1 is not PPT");
  double lo = 1.0, hi = 1.25;
  while (is_ppt_at(six, p, hi, tol)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8)
      throw NumericFailure("lambda_bisection_check: no PPT boundary found below t = 1e8");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (is_ppt_at(six, p, mid, tol) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BuildResult build_rho(const SixTuple& six, const RealVector& p, const Tolerance& tol) {
  require_weights(p, tol);

  BuildResult result;
  result.gamma_dims = gamma_span_dims(six, tol);
  for (int j = 0; j < 3; ++j)
    if (result.gamma_dims[static_cast<std::size_t>(j)] != 5)
      throw DegenerateGammaSpan("build_rho: partial conjugates for party " + std::to_string(j + 1) +
                                " span " + std::to_string(result.gamma_dims[static_cast<std::size_t>(j)]) +
                                " dimensions (need 5)");

  result.data.a = expansion_coefficients(six, tol);
  result.data.p = p;
  result.data.S = alpha_sum(result.data.a, p);
  result.data.lambda = boundary_lambda(result.data.a, p, tol);

  result.rho = rho_t(six, p, result.data.lambda);

  // Same state in the alpha form; the two expressions are algebraically equal.
  const auto others = six.others();
  Matrix alpha_form = Matrix::Zero(8, 8);
  for (int i = 0; i < 5; ++i)
    alpha_form += result.data.S * p(i) * (others[static_cast<std::size_t>(i)].flat *
                                          others[static_cast<std::size_t>(i)].flat.adjoint());
  alpha_form -= six.special().flat * six.special().flat.adjoint();
  alpha_form /= result.data.S - 1.0;
  if ((alpha_form - result.rho.mat).cwiseAbs().maxCoeff() > 1e-12)
    throw NumericFailure("build_rho: boundary and alpha forms disagree");

  const double audited = lambda_bisection_check(six, p, tol);
  if (std::abs(audited - result.data.lambda) > 1e-6)
    throw NumericFailure("build_rho: analytic lambda " + std::to_string(result.data.lambda) +
                         " disagrees with the PPT boundary " + std::to_string(audited));
  return result;
}

PptesReport verify_pptes(const HermitianOperator& rho, const Tolerance& tol) {
  if (!(rho.shape == PartyShape::of({2, 2, 2})))
    throw ContractViolation("verify_pptes: three-qubit states only");
  if (rho.mat.rows() != 8 || rho.mat.cols() != 8)
    throw ContractViolation("verify_pptes: matrix must be 8x8");
  if ((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() > tol.residual_abs)
    throw ContractViolation("verify_pptes: input is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol.residual_abs)
    throw ContractViolation("verify_pptes: input must have unit trace");

  PptesReport report;
  for (std::size_t j = 0; j < kTransposeSubsets.size(); ++j) {
    const Matrix pt = partial_transpose(rho.mat, rho.shape, kTransposeSubsets[j]);
    const Matrix sym = 0.5 * (pt + pt.adjoint());
    report.ranks[j] = numeric_rank(sym, tol);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    report.min_eigs[j] = es.eigenvalues()(0);
  }

  // Range and kernel from the spectral decomposition of rho itself.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho.mat + rho.mat.adjoint()));
  const RealVector evals = es.eigenvalues();
  const double cutoff = tol.rank_rel * evals.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    (std::abs(evals(i)) > cutoff ? range_idx : kernel_idx).push_back(i);

  auto count_products = [&](const std::vector<Eigen::Index>& idx, int& count, bool& infinite) {
    count = 0;
    infinite = false;
    if (idx.empty()) return;
    Matrix basis(8, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      basis.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(idx[i]);
    const EnumerationResult found = enumerate_in_subspace(basis, rho.shape, tol);
    if (found.kind == EnumerationKind::infinite)
      infinite = true;
    else
      count = static_cast<int>(found.vectors.size());
  };
  count_products(range_idx, report.range_products, report.range_products_infinite);
  count_products(kernel_idx, report.kernel_products, report.kernel_products_infinite);

  const bool ppt = *std::min_element(report.min_eigs.begin(), report.min_eigs.end()) >= -tol.psd_abs;
  const bool all_rank4 =
      std::all_of(report.ranks.begin(), report.ranks.end(), [](int r) { return r == 4; });
  if (ppt && all_rank4) {
    report.verdict = (report.range_products == 0 && !report.range_products_infinite)
                         ? PptesVerdict::pptes_edge_rank4
                         : PptesVerdict::separable;
  } else {
    report.verdict = PptesVerdict::inconclusive;
  }
  return report;
}

}  // namespace pvkit
