#include "pvkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pvkit {

PartyShape PartyShape::of(std::vector<int> dims) {
  if (dims.size() < 2) throw ContractViolation("PartyShape: need at least two parties");
  long long total = 1;
  for (int d : dims) {
    if (d < 2) throw ContractViolation("PartyShape: local dimensions must be >= 2");
    total *= d;
    if (total > 1 << 20) throw ContractViolation("PartyShape: composite dimension too large");
  }
  PartyShape s;
  s.dims = std::move(dims);
  s.total = static_cast<int>(total);
  return s;
}

bool PartyShape::all_qubits() const {
  return std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
}

std::vector<int> composite_digits(int index, const PartyShape& shape) {
  std::vector<int> digits(shape.dims.size());
  for (int j = shape.parties() - 1; j >= 0; --j) {
    digits[j] = index % shape.dims[j];
    index /= shape.dims[j];
  }
  return digits;
}

int composite_index(const std::vector<int>& digits, const PartyShape& shape) {
  int idx = 0;
  for (int j = 0; j < shape.parties(); ++j) idx = idx * shape.dims[j] + digits[j];
  return idx;
}

ProductVector flatten(std::vector<Vector> locals, const PartyShape& shape,
                      const Tolerance& tol) {
  if (static_cast<int>(locals.size()) != shape.parties())
    throw ContractViolation("flatten: one local vector per party required");
  for (int j = 0; j < shape.parties(); ++j) {
    if (locals[j].size() != shape.dims[j])
      throw ContractViolation("flatten: local length does not match shape");
    if (locals[j].norm() <= tol.residual_abs)
      throw ContractViolation("flatten: local vectors must be nonzero");
  }
  Vector flat = locals[0];
  for (int j = 1; j < shape.parties(); ++j) {
    Vector next(flat.size() * locals[j].size());
    for (Eigen::Index a = 0; a < flat.size(); ++a)
      next.segment(a * locals[j].size(), locals[j].size()) = flat(a) * locals[j];
    flat.swap(next);
  }
  ProductVector z;
  z.shape = shape;
  z.locals = std::move(locals);
  z.flat = std::move(flat);
  return z;
}

namespace {

Vector phase_normalized(const Vector& v) {
  const double n = v.norm();
  Vector out = v / n;
  const double floor = 1e-12 * out.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double a = std::abs(out(k));
    if (a > floor) {
      out *= std::conj(out(k)) / a;
      break;
    }
  }
  return out;
}

}  // namespace

ProductVector canonical_normalized(const ProductVector& z) {
  std::vector<Vector> locals(z.locals.size());
  for (std::size_t j = 0; j < z.locals.size(); ++j) locals[j] = phase_normalized(z.locals[j]);
  return flatten(std::move(locals), z.shape);
}

double projective_fidelity(const ProductVector& a, const ProductVector& b) {
  if (!(a.shape == b.shape)) throw ContractViolation("projective_fidelity: shape mismatch");
  const Complex ip = a.flat.dot(b.flat);  // Eigen dot conjugates the left argument
  return std::norm(ip) / (a.flat.squaredNorm() * b.flat.squaredNorm());
}

bool projectively_equal(const ProductVector& a, const ProductVector& b,
                        const Tolerance& tol) {
  return projective_fidelity(a, b) >= 1.0 - tol.dedupe_fid;
}

HermitianOperator pure_state(const ProductVector& z, const Tolerance& tol) {
  if (std::abs(z.flat.norm() - 1.0) > tol.residual_abs)
    throw ContractViolation("pure_state: product vector must be normalized");
  HermitianOperator op;
  op.shape = z.shape;
  op.mat = z.flat * z.flat.adjoint();
  return op;
}

HermitianOperator mix(const std::vector<HermitianOperator>& states,
                      const RealVector& weights, const Tolerance& tol) {
  if (states.empty() || weights.size() != static_cast<Eigen::Index>(states.size()))
    throw ContractViolation("mix: states/weights size mismatch");
  if (weights.minCoeff() <= 0.0) throw ContractViolation("mix: weights must be positive");
  if (std::abs(weights.sum() - 1.0) > tol.residual_abs)
    throw ContractViolation("mix: weights must sum to 1");
  HermitianOperator out;
  out.shape = states.front().shape;
  out.mat = Matrix::Zero(out.shape.total, out.shape.total);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].shape == out.shape)) throw ContractViolation("mix: shape mismatch");
    out.mat += weights(static_cast<Eigen::Index>(i)) * states[i].mat;
  }
  return out;
}

Matrix partial_transpose(const Matrix& mat, const PartyShape& shape,
                         const std::vector<int>& parties) {
  if (mat.rows() != shape.total || mat.cols() != shape.total)
    throw ContractViolation("partial_transpose: matrix does not match shape");
  for (int j : parties)
    if (j < 0 || j >= shape.parties())
      throw ContractViolation("partial_transpose: party index out of range");
  std::vector<bool> swap_party(shape.dims.size(), false);
  for (int j : parties) swap_party[static_cast<std::size_t>(j)] = true;

  Matrix out(shape.total, shape.total);
  std::vector<int> rd, cd;
  for (int r = 0; r < shape.total; ++r) {
    rd = composite_digits(r, shape);
    for (int c = 0; c < shape.total; ++c) {
      cd = composite_digits(c, shape);
      std::vector<int> rd2 = rd, cd2 = cd;
      for (int j = 0; j < shape.parties(); ++j)
        if (swap_party[static_cast<std::size_t>(j)]) std::swap(rd2[j], cd2[j]);
      out(composite_index(rd2, shape), composite_index(cd2, shape)) = mat(r, c);
    }
  }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& rho,
                                    const std::vector<int>& parties) {
  HermitianOperator out;
  out.shape = rho.shape;
  out.mat = partial_transpose(rho.mat, rho.shape, parties);
  return out;
}

ProductVector partial_conjugate(const ProductVector& z, const std::vector<int>& parties) {
  std::vector<Vector> locals = z.locals;
  for (int j : parties) {
    if (j < 0 || j >= z.shape.parties())
      throw ContractViolation("partial_conjugate: party index out of range");
    locals[static_cast<std::size_t>(j)] = locals[static_cast<std::size_t>(j)].conjugate();
  }
  return flatten(std::move(locals), z.shape);
}

ProductVector regroup(const ProductVector& z, int first, int second) {
  if (z.shape.parties() < 3)
    throw ContractViolation("regroup: need at least three parties");
  if (first < 0 || second != first + 1 || second >= z.shape.parties())
    throw ContractViolation("regroup: parties must be adjacent and in range");

  const Vector& a = z.locals[static_cast<std::size_t>(first)];
  const Vector& b = z.locals[static_cast<std::size_t>(second)];
  Vector merged(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    merged.segment(i * b.size(), b.size()) = a(i) * b;

  std::vector<int> dims;
  std::vector<Vector> locals;
  for (int j = 0; j < z.shape.parties(); ++j) {
    if (j == first) {
      dims.push_back(z.shape.dims[j] * z.shape.dims[j + 1]);
      locals.push_back(merged);
    } else if (j != second) {
      dims.push_back(z.shape.dims[j]);
      locals.push_back(z.locals[static_cast<std::size_t>(j)]);
    }
  }
  return flatten(std::move(locals), PartyShape::of(std::move(dims)));
}

}  // namespace pvkit
