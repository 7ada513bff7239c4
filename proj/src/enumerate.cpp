#include "pvkit/enumerate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace pvkit {

MultilinearPoly MultilinearPoly::zero(int vars) {
  MultilinearPoly p;
  p.vars = vars;
  p.coeffs.assign(std::size_t{1} << vars, Complex(0.0, 0.0));
  return p;
}

Complex MultilinearPoly::eval(const std::vector<Complex>& x) const {
  // Horner over variables, folding the top variable's halves at each level.
  std::array<Complex, 16> buf;
  std::copy(coeffs.begin(), coeffs.end(), buf.begin());
  std::size_t size = coeffs.size();
  for (int v = vars - 1; v >= 0; --v) {
    size /= 2;
    for (std::size_t i = 0; i < size; ++i)
      buf[i] += x[static_cast<std::size_t>(v)] * buf[i + size];
  }
  return buf[0];
}

double MultilinearPoly::max_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

namespace {

constexpr int kNewtonBudget = 100;
constexpr double kNewtonTarget = 1e-12;

// ---------------------------------------------------------------------------
// Charts: every party's local is either (1, x_v) or (0, 1). Bit j of the
// chart index fixes party j to (0, 1).
// ---------------------------------------------------------------------------

struct Chart {
  std::vector<bool> fixed;
  std::vector<int> unknown_party;
};

Chart make_chart(int chart_index, int parties) {
  Chart ch;
  ch.fixed.resize(static_cast<std::size_t>(parties));
  for (int j = 0; j < parties; ++j) {
    ch.fixed[static_cast<std::size_t>(j)] = (chart_index >> j) & 1;
    if (!ch.fixed[static_cast<std::size_t>(j)]) ch.unknown_party.push_back(j);
  }
  return ch;
}

// <w|z> in chart coordinates. Each monomial mask corresponds to exactly one
// composite basis index, so the coefficients are rearranged entries of conj(w).
std::vector<MultilinearPoly> chart_polys(const Matrix& complement, const PartyShape& shape,
                                         const Chart& ch) {
  const int m = static_cast<int>(ch.unknown_party.size());
  std::vector<MultilinearPoly> polys;
  polys.reserve(static_cast<std::size_t>(complement.cols()));
  for (Eigen::Index k = 0; k < complement.cols(); ++k) {
    MultilinearPoly p = MultilinearPoly::zero(m);
    for (std::size_t mask = 0; mask < p.coeffs.size(); ++mask) {
      std::vector<int> digits(static_cast<std::size_t>(shape.parties()), 1);
      for (int j = 0; j < shape.parties(); ++j)
        if (!ch.fixed[static_cast<std::size_t>(j)]) digits[static_cast<std::size_t>(j)] = 0;
      for (int v = 0; v < m; ++v)
        if (mask >> v & 1) digits[static_cast<std::size_t>(ch.unknown_party[static_cast<std::size_t>(v)])] = 1;
      p.coeffs[mask] = std::conj(complement(composite_index(digits, shape), k));
    }
    polys.push_back(std::move(p));
  }
  return polys;
}

ProductVector chart_vector(const Chart& ch, const PartyShape& shape,
                           const std::vector<Complex>& x) {
  std::vector<Vector> locals;
  locals.reserve(static_cast<std::size_t>(shape.parties()));
  std::size_t v = 0;
  for (int j = 0; j < shape.parties(); ++j) {
    Vector loc(2);
    if (ch.fixed[static_cast<std::size_t>(j)])
      loc << Complex(0.0), Complex(1.0);
    else
      loc << Complex(1.0), x[v++];
    locals.push_back(std::move(loc));
  }
  return flatten(std::move(locals), shape);
}

// ---------------------------------------------------------------------------
// Multilinear algebra helpers
// ---------------------------------------------------------------------------

// p = q + x_last * r
std::pair<MultilinearPoly, MultilinearPoly> split_last(const MultilinearPoly& p) {
  const std::size_t half = p.coeffs.size() / 2;
  MultilinearPoly q = MultilinearPoly::zero(p.vars - 1);
  MultilinearPoly r = MultilinearPoly::zero(p.vars - 1);
  for (std::size_t mask = 0; mask < half; ++mask) {
    q.coeffs[mask] = p.coeffs[mask];
    r.coeffs[mask] = p.coeffs[mask | half];
  }
  return {std::move(q), std::move(r)};
}

MultilinearPoly substitute_first(const MultilinearPoly& p, Complex s0) {
  MultilinearPoly out = MultilinearPoly::zero(p.vars - 1);
  for (std::size_t mask = 0; mask < out.coeffs.size(); ++mask)
    out.coeffs[mask] = p.coeffs[mask << 1] + s0 * p.coeffs[(mask << 1) | 1];
  return out;
}

// Degree <= 2 in each of two variables; c[i][j] multiplies s^i t^j.
struct Bivar {
  std::array<std::array<Complex, 3>, 3> c{};

  double max_coeff() const {
    double m = 0.0;
    for (const auto& row : c)
      for (const auto& e : row) m = std::max(m, std::abs(e));
    return m;
  }
  int deg_t(double zero_tol) const {
    for (int j = 2; j >= 0; --j)
      for (int i = 0; i < 3; ++i)
        if (std::abs(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > zero_tol)
          return j;
    return -1;
  }
  // t^j coefficient as a univariate polynomial in s.
  std::vector<Complex> t_coeff(int j) const {
    return {c[0][static_cast<std::size_t>(j)], c[1][static_cast<std::size_t>(j)],
            c[2][static_cast<std::size_t>(j)]};
  }
};

Bivar embed_multilinear2(const MultilinearPoly& p) {
  Bivar b;
  b.c[0][0] = p.coeffs[0];
  b.c[1][0] = p.coeffs[1];
  b.c[0][1] = p.coeffs[2];
  b.c[1][1] = p.coeffs[3];
  return b;
}

Bivar cross_det2(const MultilinearPoly& qa, const MultilinearPoly& ra,
                 const MultilinearPoly& qb, const MultilinearPoly& rb) {
  auto accumulate = [](Bivar& out, const MultilinearPoly& u, const MultilinearPoly& v,
                       double sign) {
    static constexpr int ds[4] = {0, 1, 0, 1};
    static constexpr int dt[4] = {0, 0, 1, 1};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        out.c[static_cast<std::size_t>(ds[a] + ds[b])][static_cast<std::size_t>(dt[a] + dt[b])] +=
            sign * u.coeffs[static_cast<std::size_t>(a)] * v.coeffs[static_cast<std::size_t>(b)];
  };
  Bivar g;
  accumulate(g, qa, rb, 1.0);
  accumulate(g, qb, ra, -1.0);
  return g;
}

std::vector<Complex> cross_det1(const MultilinearPoly& qa, const MultilinearPoly& ra,
                                const MultilinearPoly& qb, const MultilinearPoly& rb) {
  std::vector<Complex> g(3, Complex(0.0));
  const Complex a0 = qa.coeffs[0], a1 = qa.coeffs[1];
  const Complex b0 = rb.coeffs[0], b1 = rb.coeffs[1];
  const Complex c0 = qb.coeffs[0], c1 = qb.coeffs[1];
  const Complex d0 = ra.coeffs[0], d1 = ra.coeffs[1];
  g[0] = a0 * b0 - c0 * d0;
  g[1] = a0 * b1 + a1 * b0 - c0 * d1 - c1 * d0;
  g[2] = a1 * b1 - c1 * d1;
  return g;
}

Complex poly_eval(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Resultant in t of two bivariate polynomials, as a univariate polynomial in
// s, recovered by sampling the Sylvester determinant on the unit circle.
std::vector<Complex> sylvester_resultant_t(const Bivar& A, const Bivar& B, int da, int db) {
  const int size = da + db;
  const int degree_bound = 2 * size;
  const int N = degree_bound + 4;

  std::vector<Complex> samples(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) {
    const Complex s = std::polar(1.0, 2.0 * M_PI * m / N);
    Matrix syl = Matrix::Zero(size, size);
    for (int r = 0; r < db; ++r)
      for (int j = 0; j <= da; ++j)
        syl(r, r + j) = poly_eval(A.t_coeff(da - j), s);
    for (int r = 0; r < da; ++r)
      for (int j = 0; j <= db; ++j)
        syl(db + r, r + j) = poly_eval(B.t_coeff(db - j), s);
    samples[static_cast<std::size_t>(m)] = syl.determinant();
  }

  std::vector<Complex> coeffs(static_cast<std::size_t>(degree_bound + 1), Complex(0.0));
  for (int j = 0; j <= degree_bound; ++j) {
    Complex acc = 0.0;
    for (int m = 0; m < N; ++m)
      acc += samples[static_cast<std::size_t>(m)] * std::polar(1.0, -2.0 * M_PI * j * m / N);
    coeffs[static_cast<std::size_t>(j)] = acc / static_cast<double>(N);
  }
  return coeffs;
}

double poly_max_coeff(const std::vector<Complex>& c) {
  double m = 0.0;
  for (const auto& e : c) m = std::max(m, std::abs(e));
  return m;
}

// ---------------------------------------------------------------------------
// Gauss-Newton refinement of the full chart system
// ---------------------------------------------------------------------------

double normalized_residual(const std::vector<MultilinearPoly>& polys,
                           const std::vector<Complex>& x) {
  double sq = 0.0;
  for (const auto& p : polys) sq += std::norm(p.eval(x));
  double vec_norm = 1.0;
  for (const auto& v : x) vec_norm *= std::sqrt(1.0 + std::norm(v));
  return std::sqrt(sq) / vec_norm;
}

Complex eval_partial(const MultilinearPoly& p, const std::vector<Complex>& x, int v) {
  // Derivative in x_v: the coefficients with bit v set, folded Horner-style
  // over the remaining variables (highest first).
  std::array<Complex, 16> buf;
  const std::size_t bit = std::size_t{1} << v;
  std::size_t size = 0;
  for (std::size_t mask = 0; mask < p.coeffs.size(); ++mask)
    if (mask & bit) buf[size++] = p.coeffs[mask];
  for (int w = p.vars - 1; w >= 0; --w) {
    if (w == v) continue;
    size /= 2;
    for (std::size_t i = 0; i < size; ++i)
      buf[i] += x[static_cast<std::size_t>(w)] * buf[i + size];
  }
  return buf[0];
}

struct NewtonOutcome {
  bool converged = false;
  double residual = 0.0;  // normalized
};

// In-place partial-pivot solve of an m x m system on stack storage, m <= 4.
bool solve_small(std::array<std::array<Complex, 4>, 4>& a, std::array<Complex, 4>& b, int m) {
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
        pivot = r;
    if (std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-300)
      return false;
    std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
    std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
    for (int r = col + 1; r < m; ++r) {
      const Complex f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                        a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (int cc = col; cc < m; ++cc)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(cc)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int r = m - 1; r >= 0; --r) {
    Complex acc = b[static_cast<std::size_t>(r)];
    for (int cc = r + 1; cc < m; ++cc)
      acc -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] * b[static_cast<std::size_t>(cc)];
    b[static_cast<std::size_t>(r)] = acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
  }
  return true;
}

// Allocation-free Gauss-Newton via the normal equations; used by the grid
// oracle where millions of seeds are polished.
NewtonOutcome newton_refine_fast(const std::vector<MultilinearPoly>& polys,
                                 std::vector<Complex>& x, int max_iter) {
  const int m = static_cast<int>(x.size());
  const std::size_t c = polys.size();
  NewtonOutcome out;
  std::array<Complex, 16> f{};
  std::array<std::array<Complex, 4>, 16> jac{};
  for (int it = 0; it <= max_iter; ++it) {
    double vec_norm = 1.0;
    for (const auto& v : x) vec_norm *= std::sqrt(1.0 + std::norm(v));
    double sq = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      f[k] = polys[k].eval(x);
      sq += std::norm(f[k]);
    }
    out.residual = std::sqrt(sq) / vec_norm;
    if (out.residual <= kNewtonTarget) {
      out.converged = true;
      return out;
    }
    if (it == max_iter || m == 0) break;
    for (std::size_t k = 0; k < c; ++k)
      for (int v = 0; v < m; ++v)
        jac[k][static_cast<std::size_t>(v)] = eval_partial(polys[k], x, v);
    std::array<std::array<Complex, 4>, 4> normal{};
    std::array<Complex, 4> rhs{};
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < c; ++k)
          acc += std::conj(jac[k][static_cast<std::size_t>(a)]) * jac[k][static_cast<std::size_t>(b)];
        normal[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = acc;
        normal[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = std::conj(acc);
      }
      Complex acc = 0.0;
      for (std::size_t k = 0; k < c; ++k)
        acc -= std::conj(jac[k][static_cast<std::size_t>(a)]) * f[k];
      rhs[static_cast<std::size_t>(a)] = acc;
    }
    if (!solve_small(normal, rhs, m)) return out;
    double mag = 0.0;
    for (int v = 0; v < m; ++v) {
      x[static_cast<std::size_t>(v)] += rhs[static_cast<std::size_t>(v)];
      mag = std::max(mag, std::abs(x[static_cast<std::size_t>(v)]));
    }
    if (!(mag < 1e9)) return out;
  }
  return out;
}

NewtonOutcome newton_refine(const std::vector<MultilinearPoly>& polys,
                            std::vector<Complex>& x, int max_iter = kNewtonBudget) {
  const int m = static_cast<int>(x.size());
  const int c = static_cast<int>(polys.size());
  NewtonOutcome out;
  if (m == 0) {
    out.residual = normalized_residual(polys, x);
    out.converged = out.residual <= kNewtonTarget;
    return out;
  }
  Vector F(c), step(m);
  Matrix J(c, m);
  for (int it = 0; it <= max_iter; ++it) {
    double vec_norm = 1.0;
    for (const auto& v : x) vec_norm *= std::sqrt(1.0 + std::norm(v));
    for (int k = 0; k < c; ++k) F(k) = polys[static_cast<std::size_t>(k)].eval(x);
    out.residual = F.norm() / vec_norm;
    if (out.residual <= kNewtonTarget) {
      out.converged = true;
      return out;
    }
    if (it == max_iter) break;
    for (int k = 0; k < c; ++k)
      for (int v = 0; v < m; ++v)
        J(k, v) = eval_partial(polys[static_cast<std::size_t>(k)], x, v);
    if (c == m)
      step = J.partialPivLu().solve(-F);  // a singular J yields NaNs; caught below
    else
      step = J.completeOrthogonalDecomposition().solve(-F);
    for (int v = 0; v < m; ++v) x[static_cast<std::size_t>(v)] += step(v);
    double mag = 0.0;
    for (const auto& v : x) mag = std::max(mag, std::abs(v));
    if (!(mag < 1e9)) return out;  // diverged (or NaN)
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elimination solver for one chart
// ---------------------------------------------------------------------------

struct SysOut {
  bool infinite = false;
  std::vector<std::vector<Complex>> points;
};

class ChartSolver {
 public:
  ChartSolver(std::vector<MultilinearPoly> polys, double zero_tol, const Tolerance& tol,
              std::mt19937& rng)
      : full_(std::move(polys)), zero_tol_(zero_tol), tol_(tol), rng_(rng) {}

  SysOut solve() {
    std::vector<Complex> prefix;
    return solve_level(full_, prefix);
  }

 private:
  std::vector<MultilinearPoly> active_of(const std::vector<MultilinearPoly>& polys) const {
    std::vector<MultilinearPoly> act;
    for (const auto& p : polys)
      if (p.max_coeff() > zero_tol_) act.push_back(p);
    return act;
  }

  SysOut solve_level(const std::vector<MultilinearPoly>& polys, std::vector<Complex>& prefix) {
    const int m = polys.empty() ? 0 : polys.front().vars;
    auto active = active_of(polys);

    if (m == 0) {
      SysOut out;
      if (active.empty()) out.points.push_back({});
      return out;
    }
    if (active.empty()) {
      // Every point of this slice satisfies the substituted system; confirm
      // against the unsubstituted constraints before declaring a family.
      SysOut out;
      out.infinite = certify_infinite(polys, prefix);
      return out;
    }
    if (m == 1) return solve_linear(active);

    // Split on the last unknown and reduce to one fewer variable.
    std::vector<std::pair<MultilinearPoly, MultilinearPoly>> qr;
    qr.reserve(active.size());
    for (const auto& p : active) qr.push_back(split_last(p));

    std::vector<Complex> eliminant;
    bool have_candidate = false;

    if (m == 2) {
      // Reduced constraints are univariate in the first unknown.
      std::vector<std::vector<Complex>> reduced;
      for (const auto& [q, r] : qr)
        if (r.max_coeff() <= zero_tol_) reduced.push_back({q.coeffs[0], q.coeffs[1]});
      for (std::size_t a = 0; a < qr.size(); ++a) {
        if (qr[a].second.max_coeff() <= zero_tol_) continue;
        for (std::size_t b = a + 1; b < qr.size(); ++b) {
          if (qr[b].second.max_coeff() <= zero_tol_) continue;
          reduced.push_back(
              cross_det1(qr[a].first, qr[a].second, qr[b].first, qr[b].second));
        }
      }
      for (const auto& cand : reduced) {
        if (poly_max_coeff(cand) > zero_tol_) {
          eliminant = cand;
          have_candidate = true;
          break;
        }
      }
    } else {  // m == 3
      std::vector<Bivar> reduced;
      for (const auto& [q, r] : qr)
        if (r.max_coeff() <= zero_tol_) reduced.push_back(embed_multilinear2(q));
      for (std::size_t a = 0; a < qr.size(); ++a) {
        if (qr[a].second.max_coeff() <= zero_tol_) continue;
        for (std::size_t b = a + 1; b < qr.size(); ++b) {
          if (qr[b].second.max_coeff() <= zero_tol_) continue;
          reduced.push_back(
              cross_det2(qr[a].first, qr[a].second, qr[b].first, qr[b].second));
        }
      }
      // t-free reduced constraints are the cheapest univariate candidates.
      for (const auto& g : reduced) {
        if (g.max_coeff() <= zero_tol_) continue;
        if (g.deg_t(zero_tol_) == 0) {
          auto cand = g.t_coeff(0);
          if (poly_max_coeff(cand) > zero_tol_) {
            eliminant = cand;
            have_candidate = true;
            break;
          }
        }
      }
      if (!have_candidate) {
        for (std::size_t a = 0; a < reduced.size() && !have_candidate; ++a) {
          const int da = reduced[a].deg_t(zero_tol_);
          if (da < 1) continue;
          for (std::size_t b = a + 1; b < reduced.size(); ++b) {
            const int db = reduced[b].deg_t(zero_tol_);
            if (db < 1) continue;
            auto cand = sylvester_resultant_t(reduced[a], reduced[b], da, db);
            if (poly_max_coeff(cand) > zero_tol_) {
              eliminant = std::move(cand);
              have_candidate = true;
              break;
            }
          }
        }
      }
    }

    if (!have_candidate) {
      SysOut out;
      out.infinite = certify_infinite(polys, prefix);
      return out;
    }

    SysOut out;
    auto roots = univariate_roots(eliminant, tol_);
    if (!roots) return out;  // cannot happen: candidate is nonzero
    for (const Complex& s0 : *roots) {
      std::vector<MultilinearPoly> sub;
      sub.reserve(active.size());
      for (const auto& p : active) sub.push_back(substitute_first(p, s0));
      prefix.push_back(s0);
      SysOut inner = solve_level(sub, prefix);
      prefix.pop_back();
      if (inner.infinite) {
        out.infinite = true;
        out.points.clear();
        return out;
      }
      for (auto& pt : inner.points) {
        std::vector<Complex> full_pt;
        full_pt.reserve(pt.size() + 1);
        full_pt.push_back(s0);
        full_pt.insert(full_pt.end(), pt.begin(), pt.end());
        out.points.push_back(std::move(full_pt));
      }
    }
    return out;
  }

  SysOut solve_linear(const std::vector<MultilinearPoly>& active) {
    SysOut out;
    double best = zero_tol_;
    std::size_t pick = active.size();
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double slope = std::abs(active[k].coeffs[1]);
      if (slope > best) {
        best = slope;
        pick = k;
      }
    }
    if (pick == active.size()) return out;  // nonzero constants: no solution
    out.points.push_back({-active[pick].coeffs[0] / active[pick].coeffs[1]});
    return out;
  }

  Complex random_sample() {
    std::uniform_real_distribution<double> radius(0.4, 1.8);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    return std::polar(radius(rng_), angle(rng_));
  }

  bool verify_full(const std::vector<Complex>& full_point) {
    return normalized_residual(full_, full_point) <= tol_.residual_abs;
  }

  // One random point on the suspected component, solved exactly in the
  // remaining unknowns and checked against the full chart system.
  bool sample_point(const std::vector<MultilinearPoly>& polys, std::vector<Complex>& prefix) {
    const int m = polys.empty() ? 0 : polys.front().vars;
    if (m == 0) return verify_full(prefix);
    auto active = active_of(polys);
    if (active.empty()) {
      std::vector<Complex> full_pt = prefix;
      for (int v = 0; v < m; ++v) full_pt.push_back(random_sample());
      return verify_full(full_pt);
    }
    const Complex s0 = random_sample();
    std::vector<MultilinearPoly> sub;
    sub.reserve(active.size());
    for (const auto& p : active) sub.push_back(substitute_first(p, s0));
    prefix.push_back(s0);
    SysOut inner = solve_level(sub, prefix);
    bool ok = false;
    if (inner.infinite) {
      ok = true;  // deeper level certified with its own samples
    } else {
      for (const auto& pt : inner.points) {
        std::vector<Complex> full_pt = prefix;
        full_pt.insert(full_pt.end(), pt.begin(), pt.end());
        if (verify_full(full_pt)) {
          ok = true;
          break;
        }
      }
    }
    prefix.pop_back();
    return ok;
  }

  bool certify_infinite(const std::vector<MultilinearPoly>& polys,
                        std::vector<Complex>& prefix) {
    for (int attempt = 0; attempt < 3; ++attempt)
      if (!sample_point(polys, prefix)) return false;
    return true;
  }

  std::vector<MultilinearPoly> full_;
  double zero_tol_;
  Tolerance tol_;
  std::mt19937& rng_;
};

// ---------------------------------------------------------------------------
// Shared validation and canonical output
// ---------------------------------------------------------------------------

void require_orthonormal_basis(const Matrix& basis, const PartyShape& shape,
                               const Tolerance& tol) {
  if (basis.size() == 0 || basis.cols() == 0)
    throw ContractViolation("subspace basis must be nonempty");
  if (basis.rows() != shape.total)
    throw ContractViolation("subspace basis does not match the shape");
  const Matrix gram = basis.adjoint() * basis;
  const double dev =
      (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (dev > tol.residual_abs)
    throw ContractViolation("subspace basis is not orthonormal");
}

bool flat_less(const Vector& a, const Vector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

std::vector<ProductVector> canonical_dedupe(std::vector<ProductVector> found,
                                            const Tolerance& tol) {
  for (auto& z : found) z = canonical_normalized(z);
  std::sort(found.begin(), found.end(),
            [](const ProductVector& a, const ProductVector& b) { return flat_less(a.flat, b.flat); });
  std::vector<ProductVector> kept;
  for (auto& z : found) {
    bool dup = false;
    for (const auto& seen : kept)
      if (projective_fidelity(z, seen) >= 1.0 - tol.dedupe_fid) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(std::move(z));
  }
  return kept;
}

}  // namespace

double membership_residual(const ProductVector& z, const Matrix& basis) {
  if (basis.rows() != z.flat.size())
    throw ContractViolation("membership_residual: dimension mismatch");
  const Vector projected = basis * (basis.adjoint() * z.flat);
  return (z.flat - projected).norm() / z.flat.norm();
}

EnumerationResult enumerate_in_subspace(const Matrix& basis, const PartyShape& shape,
                                        const Tolerance& tol) {
  tol.validate();
  if (!shape.all_qubits() || shape.parties() > 3)
    throw UnsupportedShape("enumerate_in_subspace: only 2- and 3-qubit shapes are supported");
  require_orthonormal_basis(basis, shape, tol);

  EnumerationResult result;
  if (basis.cols() >= shape.total) {
    result.kind = EnumerationKind::infinite;
    return result;
  }
  const Matrix complement = kernel_basis(basis.adjoint(), tol);

  std::mt19937 rng(0x9e3779b9u);
  const int n_charts = 1 << shape.parties();
  std::vector<ProductVector> found;
  std::vector<double> residuals;

  for (int chart_index = 0; chart_index < n_charts; ++chart_index) {
    const Chart ch = make_chart(chart_index, shape.parties());
    auto polys = chart_polys(complement, shape, ch);
    double scale = 0.0;
    for (const auto& p : polys) scale = std::max(scale, p.max_coeff());
    const double zero_tol = 1e-10 * std::max(1.0, scale);

    ChartSolver solver(polys, zero_tol, tol, rng);
    SysOut out = solver.solve();
    ++result.charts_visited;

    if (out.infinite) {
      result.kind = EnumerationKind::infinite;
      result.vectors.clear();
      result.residual_max = 0.0;
      return result;
    }
    for (auto& pt : out.points) {
      NewtonOutcome polish = newton_refine(polys, pt);
      if (!polish.converged) {
        if (polish.residual <= tol.residual_abs)
          throw NumericFailure("enumerate_in_subspace: Newton stalled near a solution in chart " +
                               std::to_string(chart_index));
        continue;  // spurious elimination root
      }
      ProductVector z = chart_vector(ch, shape, pt);
      const double res = membership_residual(z, basis);
      if (res <= tol.residual_abs) {
        found.push_back(std::move(z));
        residuals.push_back(res);
      }
    }
  }

  result.kind = EnumerationKind::finite;
  result.vectors = canonical_dedupe(std::move(found), tol);
  result.residual_max = 0.0;
  for (const auto& z : result.vectors)
    result.residual_max = std::max(result.residual_max, membership_residual(z, basis));
  return result;
}

std::vector<ProductVector> oracle_grid_search(const Matrix& basis, const PartyShape& shape,
                                              int grid_density, const Tolerance& tol) {
  tol.validate();
  if (!shape.all_qubits() || shape.parties() > 4)
    throw UnsupportedShape("oracle_grid_search: only 2-, 3- and 4-qubit shapes are supported");
  if (grid_density < 1) throw ContractViolation("oracle_grid_search: grid_density must be >= 1");
  require_orthonormal_basis(basis, shape, tol);
  if (basis.cols() >= shape.total)
    throw ContractViolation("oracle_grid_search: subspace equals the full space");
  const Matrix complement = kernel_basis(basis.adjoint(), tol);

  std::vector<double> axis;
  for (int i = 0; i < (grid_density + 1) / 2; ++i) {
    const double v = 0.25 * std::pow(2.2, i);
    axis.push_back(v);
    if (static_cast<int>(axis.size()) < grid_density) axis.push_back(-v);
  }
  std::sort(axis.begin(), axis.end());

  std::vector<Complex> seeds1d;
  for (double re : axis)
    for (double im : axis) seeds1d.emplace_back(re, im);

  std::vector<ProductVector> found;
  const int n_charts = 1 << shape.parties();
  for (int chart_index = 0; chart_index < n_charts; ++chart_index) {
    const Chart ch = make_chart(chart_index, shape.parties());
    auto polys = chart_polys(complement, shape, ch);
    const int m = static_cast<int>(ch.unknown_party.size());

    std::vector<std::size_t> odo(static_cast<std::size_t>(m), 0);
    bool done = false;
    while (!done) {
      std::vector<Complex> x(static_cast<std::size_t>(m));
      for (int v = 0; v < m; ++v) x[static_cast<std::size_t>(v)] = seeds1d[odo[static_cast<std::size_t>(v)]];

      NewtonOutcome polish = newton_refine_fast(polys, x, 16);
      if (polish.converged) {
        ProductVector z = chart_vector(ch, shape, x);
        if (membership_residual(z, basis) <= tol.residual_abs) found.push_back(std::move(z));
      }

      if (m == 0) break;
      int v = 0;
      while (v < m) {
        if (++odo[static_cast<std::size_t>(v)] < seeds1d.size()) break;
        odo[static_cast<std::size_t>(v)] = 0;
        ++v;
      }
      done = (v == m);
    }
  }
  return canonical_dedupe(std::move(found), tol);
}

}  // namespace pvkit
