#include "pvkit/linalg.hpp"
#include "pvkit/registry.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace pvkit;
using namespace pvtest;

namespace {

Matrix columns_of(const std::vector<ProductVector>& vs, int first, int count) {
  Matrix cols(vs.front().flat.size(), count);
  for (int i = 0; i < count; ++i) cols.col(i) = vs[static_cast<std::size_t>(first + i)].flat;
  return cols;
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("numeric_rank: identity and fixture spans") {
  CHECK(numeric_rank(Matrix::Identity(8, 8)) == 8);

  const auto exam_a = load_example("exam-a").load_vectors();
  CHECK(numeric_rank(columns_of(exam_a, 0, 4)) == 4);  // the UPB

  const auto vec_ex = load_example("vec-ex").load_vectors();
  CHECK(numeric_rank(columns_of(vec_ex, 0, 6)) == 5);
}

TEST_CASE("numeric_rank: zero matrix") {
  CHECK(numeric_rank(Matrix::Zero(3, 3)) == 0);
  CHECK_THROWS_AS(numeric_rank(Matrix(0, 0)), ContractViolation);
}

TEST_CASE("kernel_basis: zero map, bra rows of exam-a, full-rank input") {
  CHECK(kernel_basis(Matrix::Zero(3, 3)).cols() == 3);

  // Rows <z_i| for all six vectors; the kernel must coincide with span{w1,w2,w3}.
  const auto ex = load_example("exam-a");
  const auto zs = ex.load_vectors();
  const auto ws = ex.load_auxiliary();
  Matrix rows(6, 8);
  for (int i = 0; i < 6; ++i) rows.row(i) = zs[static_cast<std::size_t>(i)].flat.adjoint();
  const Matrix kernel = kernel_basis(rows);
  REQUIRE(kernel.cols() == 3);

  std::vector<Vector> w123(ws.begin(), ws.begin() + 3);
  const Matrix wbasis = orthonormalize(w123);
  REQUIRE(wbasis.cols() == 3);
  for (int c = 0; c < 3; ++c) {
    const Vector k = kernel.col(c);
    CHECK((k - wbasis * (wbasis.adjoint() * k)).norm() <= Tolerance{}.residual_abs);
    const Vector w = wbasis.col(c);
    CHECK((w - kernel * (kernel.adjoint() * w)).norm() <= Tolerance{}.residual_abs);
  }

  // A well-conditioned full-rank square matrix from random orthonormal factors.
  auto rng = make_rng(11);
  const Matrix u = random_unitary(rng, 5);
  const Matrix v = random_unitary(rng, 5);
  Eigen::VectorXd sv(5);
  sv << 3.0, 2.5, 1.7, 0.9, 0.4;
  const Matrix full_rank = u * sv.asDiagonal() * v.adjoint();
  CHECK(kernel_basis(full_rank).cols() == 0);
}

TEST_CASE("orthonormalize: duplicates collapse, fixture span") {
  Vector e1 = Vector::Zero(4), e2 = Vector::Zero(4);
  e1(0) = 1.0;
  e2(1) = 1.0;
  CHECK(orthonormalize(std::vector<Vector>{e1, e1}).cols() == 1);
  CHECK(orthonormalize(std::vector<Vector>{e1, e2}).cols() == 2);

  const auto vec_ex = load_example("vec-ex").load_vectors();
  std::vector<Vector> flats;
  for (const auto& z : vec_ex) flats.push_back(z.flat);
  const Matrix basis = orthonormalize(flats);
  CHECK(basis.cols() == 5);
  CHECK((basis.adjoint() * basis - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian_eigenvalues: diagonal, projector, rejection") {
  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 1.0;
  diag(1, 1) = 2.0;
  diag(2, 2) = 3.0;
  const RealVector evals = hermitian_eigenvalues(diag);
  CHECK(evals(0) == doctest::Approx(1.0));
  CHECK(evals(1) == doctest::Approx(2.0));
  CHECK(evals(2) == doctest::Approx(3.0));

  const auto zs = load_example("exam-a").load_vectors();
  const Vector z6 = zs[5].flat / zs[5].flat.norm();
  const RealVector proj_evals = hermitian_eigenvalues(z6 * z6.adjoint());
  for (int k = 0; k < 7; ++k) CHECK(std::abs(proj_evals(k)) < 1e-12);
  CHECK(proj_evals(7) == doctest::Approx(1.0));

  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigenvalues(skew), ContractViolation);
}

TEST_CASE("solve_in_span: trivial expansion and dependent-basis rejection") {
  auto rng = make_rng(17);
  const Matrix basis = random_subspace(rng, 6, 3);
  const SpanSolve s = solve_in_span(basis, Vector(basis.col(0)));
  REQUIRE(s.in_span);
  CHECK(std::abs(s.coeffs(0) - 1.0) < 1e-12);
  CHECK(std::abs(s.coeffs(1)) < 1e-12);
  CHECK(std::abs(s.coeffs(2)) < 1e-12);

  Matrix dependent(6, 2);
  dependent.col(0) = basis.col(0);
  dependent.col(1) = 2.0 * basis.col(0);
  CHECK_THROWS_AS(solve_in_span(dependent, Vector(basis.col(1))), ContractViolation);
}

TEST_CASE("solve_in_span: exam-a coefficients match the exact rational solve") {
  const auto ex = load_example("exam-a");
  const auto zs = ex.load_vectors();

  // Independent oracle: exact elimination on the integer coordinates.
  std::vector<std::vector<long long>> A(8, std::vector<long long>(5));
  std::vector<long long> b(8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 5; ++c)
      A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          static_cast<long long>(std::llround(zs[static_cast<std::size_t>(c)].flat(r).real()));
    b[static_cast<std::size_t>(r)] = static_cast<long long>(std::llround(zs[5].flat(r).real()));
  }
  const auto exact = solve_rational(A, b);
  const std::vector<Rat> frozen{{-1, 3}, {-1, 3}, {-1, 3}, {1, 9}, {1, 9}};
  for (int i = 0; i < 5; ++i) CHECK(exact[static_cast<std::size_t>(i)] == frozen[static_cast<std::size_t>(i)]);

  std::vector<Vector> basis;
  for (int i = 0; i < 5; ++i) basis.push_back(zs[static_cast<std::size_t>(i)].flat);
  const SpanSolve s = solve_in_span(basis, zs[5].flat);
  REQUIRE(s.in_span);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(s.coeffs(i).real() - exact[static_cast<std::size_t>(i)].value()) < 1e-10);
    CHECK(std::abs(s.coeffs(i).imag()) < 1e-10);
  }
}

TEST_CASE("solve_in_span: vec-ex dependency (1,-1,1,-1,1)") {
  const auto zs = load_example("vec-ex").load_vectors();
  std::vector<Vector> basis;
  for (int i = 0; i < 5; ++i) basis.push_back(zs[static_cast<std::size_t>(i)].flat);
  const SpanSolve s = solve_in_span(basis, zs[5].flat);
  REQUIRE(s.in_span);
  const double expected[5] = {1.0, -1.0, 1.0, -1.0, 1.0};
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(s.coeffs(i).real() - expected[i]) < 1e-10);
    CHECK(std::abs(s.coeffs(i).imag()) < 1e-10);
  }
}

TEST_CASE("univariate_roots: quadratic, triple zero, zero polynomial") {
  const auto quad = univariate_roots({Complex(-1.0), Complex(0.0), Complex(1.0)});
  REQUIRE(quad.has_value());
  REQUIRE(quad->size() == 2);
  CHECK(std::abs((*quad)[0] - Complex(-1.0)) < 1e-12);
  CHECK(std::abs((*quad)[1] - Complex(1.0)) < 1e-12);

  const auto cubic = univariate_roots({Complex(0.0), Complex(0.0), Complex(0.0), Complex(1.0)});
  REQUIRE(cubic.has_value());
  REQUIRE(cubic->size() == 3);
  for (const auto& r : *cubic) CHECK(std::abs(r) < 1e-4);

  CHECK_FALSE(univariate_roots({Complex(0.0), Complex(1e-12)}).has_value());
  const auto constant = univariate_roots({Complex(2.0)});
  REQUIRE(constant.has_value());
  CHECK(constant->empty());
}

TEST_CASE("property: rank + kernel dimension = columns") {
  auto rng = make_rng(23);
  std::uniform_int_distribution<int> dim(1, 16);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = dim(rng), c = dim(rng);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = random_complex(rng);
    if (kind(rng) == 1 && c > 1) m.col(c - 1) = m.col(0);  // force a rank drop sometimes
    if (kind(rng) == 2) m.setZero();
    CHECK(numeric_rank(m) + kernel_basis(m).cols() == c);
  }
}

TEST_CASE("property: eigenvalues of U diag(l) U* recover l") {
  auto rng = make_rng(29);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 7;
    const Matrix u = random_unitary(rng, d);
    Eigen::VectorXd lambda(d);
    for (int k = 0; k < d; ++k) lambda(k) = uni(rng);
    std::sort(lambda.data(), lambda.data() + d);
    const Matrix m = u * lambda.asDiagonal() * u.adjoint();
    const RealVector recovered = hermitian_eigenvalues(m);
    for (int k = 0; k < d; ++k) CHECK(std::abs(recovered(k) - lambda(k)) < 1e-10);
  }
}

TEST_CASE("property: solve_in_span re-synthesizes the target") {
  auto rng = make_rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix basis = random_subspace(rng, 8, 4);
    Vector target = Vector::Zero(8);
    for (int c = 0; c < 4; ++c) target += random_complex(rng) * basis.col(c);
    const SpanSolve s = solve_in_span(basis, target);
    REQUIRE(s.in_span);
    CHECK((basis * s.coeffs - target).norm() <= Tolerance{}.residual_abs);
  }
}

TEST_CASE("property: polynomial residual at every returned root") {
  auto rng = make_rng(37);
  std::uniform_int_distribution<int> deg(1, 8);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> mag(1.0 / 3.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
    double maxc = 0.0;
    for (auto& c : coeffs) {
      c = std::polar(mag(rng), 2.0 * M_PI * uni(rng));
      maxc = std::max(maxc, std::abs(c));
    }
    const auto roots = univariate_roots(coeffs);
    REQUIRE(roots.has_value());
    CHECK(roots->size() == static_cast<std::size_t>(n));
    for (const auto& r : *roots) {
      Complex value = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * r + *it;
      CHECK(std::abs(value) <= 1e-9 * maxc);
    }
  }
}

TEST_CASE("property: root residual stays at evaluation noise for skewed leading coefficients") {
  // A tiny leading coefficient pushes roots far out, where |p(r)| can only be
  // as small as the floating-point evaluation scale sum_k |c_k| |r|^k allows.
  auto rng = make_rng(41);
  std::uniform_int_distribution<int> deg(1, 8);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
    double maxc = 0.0;
    for (auto& c : coeffs) {
      c = std::polar(uni(rng), 2.0 * M_PI * uni(rng));
      maxc = std::max(maxc, std::abs(c));
    }
    if (maxc < 0.05) continue;
    const auto roots = univariate_roots(coeffs);
    REQUIRE(roots.has_value());
    for (const auto& r : *roots) {
      Complex value = 0.0;
      double eval_scale = 0.0, power = 1.0;
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        eval_scale += std::abs(coeffs[k]) * power;
        power *= std::abs(r);
      }
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * r + *it;
      CHECK(std::abs(value) <= 1e-9 * eval_scale);
    }
  }
}

TEST_SUITE_END();
