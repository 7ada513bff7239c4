#include "pvkit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace pvkit {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from_singvalues(const Eigen::VectorXd& sv, double rank_rel) {
  if (sv.size() == 0) return 0;
  const double cutoff = rank_rel * sv(0);  // singular values come sorted descending
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
  return r;
}

}  // namespace

int numeric_rank(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) throw ContractViolation("numeric_rank: empty matrix");
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singvalues(svd.singularValues(), tol.rank_rel);
}

Matrix kernel_basis(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) throw ContractViolation("kernel_basis: empty matrix");
  auto svd = full_svd(m);
  const int r = rank_from_singvalues(svd.singularValues(), tol.rank_rel);
  return svd.matrixV().rightCols(m.cols() - r);
}

Matrix orthonormalize(const Matrix& columns, const Tolerance& tol) {
  if (columns.size() == 0) throw ContractViolation("orthonormalize: empty input");
  auto svd = full_svd(columns);
  const int r = rank_from_singvalues(svd.singularValues(), tol.rank_rel);
  return svd.matrixU().leftCols(r);
}

Matrix orthonormalize(const std::vector<Vector>& vectors, const Tolerance& tol) {
  if (vectors.empty()) throw ContractViolation("orthonormalize: empty input");
  const auto n = vectors.front().size();
  Matrix cols(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n)
      throw ContractViolation("orthonormalize: vectors of differing length");
    cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return orthonormalize(cols, tol);
}

RealVector hermitian_eigenvalues(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols() || m.size() == 0)
    throw ContractViolation("hermitian_eigenvalues: matrix must be square and nonempty");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol.residual_abs)
    throw ContractViolation("hermitian_eigenvalues: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericFailure("hermitian_eigenvalues: eigensolver did not converge");
  return es.eigenvalues();
}

SpanSolve solve_in_span(const Matrix& basis_columns, const Vector& target,
                        const Tolerance& tol) {
  if (basis_columns.size() == 0) throw ContractViolation("solve_in_span: empty basis");
  if (basis_columns.rows() != target.size())
    throw ContractViolation("solve_in_span: dimension mismatch");
  if (numeric_rank(basis_columns, tol) != basis_columns.cols())
    throw ContractViolation("solve_in_span: basis vectors are linearly dependent");
  auto svd = Eigen::JacobiSVD<Matrix>(basis_columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SpanSolve out;
  out.coeffs = svd.solve(target);
  out.residual = (basis_columns * out.coeffs - target).norm();
  out.in_span = out.residual <= tol.residual_abs;
  return out;
}

SpanSolve solve_in_span(const std::vector<Vector>& basis_vectors, const Vector& target,
                        const Tolerance& tol) {
  if (basis_vectors.empty()) throw ContractViolation("solve_in_span: empty basis");
  Matrix cols(target.size(), static_cast<Eigen::Index>(basis_vectors.size()));
  for (std::size_t i = 0; i < basis_vectors.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = basis_vectors[i];
  return solve_in_span(cols, target, tol);
}

namespace {

Complex poly_eval(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex poly_deriv_eval(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;)
    acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

Complex newton_polish(const std::vector<Complex>& c, Complex x, double scale) {
  Complex best = x;
  double best_res = std::abs(poly_eval(c, x));
  for (int it = 0; it < 60; ++it) {
    const Complex f = poly_eval(c, x);
    const double res = std::abs(f);
    if (res < best_res) {
      best = x;
      best_res = res;
    }
    if (res <= 1e-14 * scale) break;
    const Complex df = poly_deriv_eval(c, x);
    if (std::abs(df) == 0.0) break;
    x -= f / df;
  }
  return best;
}

}  // namespace

std::optional<std::vector<Complex>> univariate_roots(const std::vector<Complex>& coeffs,
                                                     const Tolerance& tol) {
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (coeffs.empty() || scale <= tol.residual_abs) return std::nullopt;

  // Leading coefficients at roundoff level would turn the companion matrix
  // into a near-singular balancing problem; the dropped roots live at infinity.
  std::size_t deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-12 * scale) --deg;
  if (deg == 0) return std::vector<Complex>{};  // nonzero constant

  std::vector<Complex> monic(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k) monic[k] = coeffs[k] / coeffs[deg];

  Matrix companion = Matrix::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t k = 0; k + 1 < deg; ++k)
    companion(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = 1.0;
  for (std::size_t k = 0; k < deg; ++k)
    companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(deg - 1)) = -monic[k];

  Eigen::ComplexEigenSolver<Matrix> es(companion);
  if (es.info() != Eigen::Success)
    throw NumericFailure("univariate_roots: companion eigensolver did not converge");

  std::vector<Complex> roots(deg);
  for (std::size_t k = 0; k < deg; ++k)
    roots[k] = newton_polish(monic, es.eigenvalues()(static_cast<Eigen::Index>(k)), 1.0);
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace pvkit
