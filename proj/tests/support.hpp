#pragma once

#include "pvkit/linalg.hpp"
#include "pvkit/position.hpp"
#include "pvkit/states.hpp"

#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace pvtest {

using namespace pvkit;

inline std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

inline Complex random_complex(std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  return {gauss(rng), gauss(rng)};
}

inline Vector random_vector(std::mt19937& rng, int dim) {
  Vector v(dim);
  do {
    for (int k = 0; k < dim; ++k) v(k) = random_complex(rng);
  } while (v.norm() < 1e-3);
  return v;
}

inline Vector random_real_vector(std::mt19937& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  do {
    for (int k = 0; k < dim; ++k) v(k) = Complex(gauss(rng), 0.0);
  } while (v.norm() < 1e-3);
  return v;
}

inline ProductVector random_product_vector(std::mt19937& rng, const PartyShape& shape,
                                           bool real_entries = false) {
  std::vector<Vector> locals;
  for (int j = 0; j < shape.parties(); ++j)
    locals.push_back(real_entries ? random_real_vector(rng, shape.dims[j])
                                  : random_vector(rng, shape.dims[j]));
  return flatten(std::move(locals), shape);
}

inline std::vector<ProductVector> random_gp_set(std::mt19937& rng, const PartyShape& shape,
                                                int k, bool real_entries = false) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<ProductVector> vs;
    for (int i = 0; i < k; ++i) vs.push_back(random_product_vector(rng, shape, real_entries));
    if (check_general_position(vs).is_gp) return vs;
  }
  throw std::runtime_error("random_gp_set: no general-position sample found");
}

inline Matrix random_subspace(std::mt19937& rng, int d, int dim) {
  Matrix cols(d, dim);
  for (int c = 0; c < dim; ++c) cols.col(c) = random_vector(rng, d);
  Matrix basis = orthonormalize(cols);
  if (basis.cols() != dim) throw std::runtime_error("random_subspace: degenerate draw");
  return basis;
}

inline Matrix random_unitary(std::mt19937& rng, int d) {
  Matrix basis = random_subspace(rng, d, d);
  return basis;
}

inline RealVector dirichlet_weights(std::mt19937& rng, int k) {
  std::uniform_real_distribution<double> uni(1e-12, 1.0);
  RealVector w(k);
  for (int i = 0; i < k; ++i) w(i) = -std::log(uni(rng));
  return w / w.sum();
}

// ---------------------------------------------------------------------------
// Exact rational arithmetic, used to recompute expansion coefficients and the
// alpha numerators independently of the floating-point path.
// ---------------------------------------------------------------------------

struct Rat {
  long long n = 0, d = 1;

  Rat() = default;
  Rat(long long num) : n(num), d(1) {}
  Rat(long long num, long long den) : n(num), d(den) { normalize(); }

  void normalize() {
    if (d == 0) throw std::runtime_error("Rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }
  friend Rat operator+(Rat a, Rat b) { return Rat(a.n * b.d + b.n * a.d, a.d * b.d); }
  friend Rat operator-(Rat a, Rat b) { return Rat(a.n * b.d - b.n * a.d, a.d * b.d); }
  friend Rat operator*(Rat a, Rat b) { return Rat(a.n * b.n, a.d * b.d); }
  friend Rat operator/(Rat a, Rat b) {
    if (b.n == 0) throw std::runtime_error("Rat: division by zero");
    return Rat(a.n * b.d, a.d * b.n);
  }
  friend bool operator==(Rat a, Rat b) { return a.n == b.n && a.d == b.d; }
  bool is_zero() const { return n == 0; }
  double value() const { return static_cast<double>(n) / static_cast<double>(d); }
};

// Exact Gaussian elimination for A x = b with A integer (rows x cols,
// rows >= cols, full column rank, consistent system).
inline std::vector<Rat> solve_rational(const std::vector<std::vector<long long>>& A,
                                       const std::vector<long long>& b) {
  const std::size_t rows = A.size(), cols = A.front().size();
  std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = Rat(A[r][c]);
    m[r][cols] = Rat(b[r]);
  }
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_of_col(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pr = pivot_row;
    while (pr < rows && m[pr][c].is_zero()) ++pr;
    if (pr == rows) throw std::runtime_error("solve_rational: rank deficient");
    std::swap(m[pr], m[pivot_row]);
    const Rat inv = Rat(1) / m[pivot_row][c];
    for (std::size_t cc = c; cc <= cols; ++cc) m[pivot_row][cc] = m[pivot_row][cc] * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || m[r][c].is_zero()) continue;
      const Rat f = m[r][c];
      for (std::size_t cc = c; cc <= cols; ++cc)
        m[r][cc] = m[r][cc] - f * m[pivot_row][cc];
    }
    pivot_of_col[c] = pivot_row;
    ++pivot_row;
  }
  for (std::size_t r = pivot_row; r < rows; ++r)
    if (!m[r][cols].is_zero()) throw std::runtime_error("solve_rational: inconsistent system");
  std::vector<Rat> x(cols);
  for (std::size_t c = 0; c < cols; ++c) x[c] = m[pivot_of_col[c]][cols];
  return x;
}

}  // namespace pvtest
