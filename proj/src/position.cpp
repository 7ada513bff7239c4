#include "pvkit/position.hpp"

#include "pvkit/linalg.hpp"

#include <algorithm>
#include <map>

namespace pvkit {

namespace {

void require_shared_shape(const std::vector<ProductVector>& vs) {
  if (vs.empty()) throw ContractViolation("empty product-vector list");
  for (const auto& v : vs)
    if (!(v.shape == vs.front().shape))
      throw ContractViolation("product vectors must share one shape");
}

bool locals_parallel(const Vector& a, const Vector& b, const Tolerance& tol) {
  const double ip = std::norm(Complex(a.dot(b)));
  return ip >= (1.0 - tol.dedupe_fid) * a.squaredNorm() * b.squaredNorm();
}

Matrix local_columns(const std::vector<ProductVector>& vs, int party,
                     const std::vector<int>& indices) {
  const Eigen::Index dim = vs.front().locals[static_cast<std::size_t>(party)].size();
  Matrix cols(dim, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) =
        vs[static_cast<std::size_t>(indices[i])].locals[static_cast<std::size_t>(party)];
  return cols;
}

Matrix flat_columns(const std::vector<ProductVector>& vs) {
  Matrix cols(vs.front().flat.size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = vs[i].flat;
  return cols;
}

// Visit index subsets of {0..k-1} of the given size in lexicographic order.
template <typename Fn>
bool visit_subsets(int k, int size, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (fn(idx)) return true;
    int i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == k - size + i) --i;
    if (i < 0) return false;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

GpReport check_general_position(const std::vector<ProductVector>& vs, const Tolerance& tol) {
  require_shared_shape(vs);
  const int k = static_cast<int>(vs.size());
  GpReport report;
  report.is_gp = true;
  for (int party = 0; party < vs.front().shape.parties(); ++party) {
    const int max_size = std::min(k, vs.front().shape.dims[static_cast<std::size_t>(party)]);
    for (int size = 2; size <= max_size && report.is_gp; ++size) {
      visit_subsets(k, size, [&](const std::vector<int>& idx) {
        bool deficient;
        if (size == 2) {
          deficient = locals_parallel(vs[static_cast<std::size_t>(idx[0])].locals[static_cast<std::size_t>(party)],
                                      vs[static_cast<std::size_t>(idx[1])].locals[static_cast<std::size_t>(party)], tol);
        } else {
          deficient = numeric_rank(local_columns(vs, party, idx), tol) < size;
        }
        if (deficient) {
          report.is_gp = false;
          report.witness = GpReport::Witness{party, idx};
        }
        return deficient;
      });
    }
    if (!report.is_gp) break;
  }
  return report;
}

namespace {

// Block spans its party space iff its locals have full local rank. Memoized
// over (party, membership mask); for qubit parties a non-parallel pair decides.
class BlockSpanCache {
 public:
  BlockSpanCache(const std::vector<ProductVector>& vs, const Tolerance& tol)
      : vs_(vs), tol_(tol) {}

  bool spans(int party, unsigned mask) {
    const int dim = vs_.front().shape.dims[static_cast<std::size_t>(party)];
    if (static_cast<int>(__builtin_popcount(mask)) < dim) return false;
    auto key = std::make_pair(party, mask);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(vs_.size()); ++i)
      if (mask >> i & 1) idx.push_back(i);
    bool full;
    if (dim == 2) {
      full = false;
      for (std::size_t a = 0; a < idx.size() && !full; ++a)
        for (std::size_t b = a + 1; b < idx.size() && !full; ++b)
          if (!locals_parallel(vs_[static_cast<std::size_t>(idx[a])].locals[static_cast<std::size_t>(party)],
                               vs_[static_cast<std::size_t>(idx[b])].locals[static_cast<std::size_t>(party)], tol_))
            full = true;
    } else {
      full = numeric_rank(local_columns(vs_, party, idx), tol_) == dim;
    }
    cache_.emplace(key, full);
    return full;
  }

 private:
  const std::vector<ProductVector>& vs_;
  Tolerance tol_;
  std::map<std::pair<int, unsigned>, bool> cache_;
};

// Per party, a vector orthogonal to the block's local span (Prop-style
// witness); an empty block leaves the whole party space free.
ProductVector partition_witness(const std::vector<ProductVector>& vs,
                                const std::vector<std::vector<int>>& blocks,
                                const Tolerance& tol) {
  const PartyShape& shape = vs.front().shape;
  std::vector<Vector> locals;
  for (int party = 0; party < shape.parties(); ++party) {
    const auto& block = blocks[static_cast<std::size_t>(party)];
    if (block.empty()) {
      Vector e1 = Vector::Zero(shape.dims[static_cast<std::size_t>(party)]);
      e1(0) = 1.0;
      locals.push_back(std::move(e1));
      continue;
    }
    Matrix rows(static_cast<Eigen::Index>(block.size()), shape.dims[static_cast<std::size_t>(party)]);
    for (std::size_t i = 0; i < block.size(); ++i)
      rows.row(static_cast<Eigen::Index>(i)) =
          vs[static_cast<std::size_t>(block[i])].locals[static_cast<std::size_t>(party)].adjoint();
    const Matrix kernel = kernel_basis(rows, tol);
    if (kernel.cols() == 0)
      throw NumericFailure("gupb witness: block unexpectedly spans its party space");
    locals.push_back(kernel.col(0));
  }
  return flatten(std::move(locals), shape);
}

}  // namespace

GupbReport check_gupb_partition(const std::vector<ProductVector>& vs, const Tolerance& tol) {
  require_shared_shape(vs);
  const int k = static_cast<int>(vs.size());
  const int n = vs.front().shape.parties();
  if (k > 20) throw ContractViolation("check_gupb_partition: too many vectors for the n^k scan");

  BlockSpanCache cache(vs, tol);
  std::vector<int> assign(static_cast<std::size_t>(k), 0);
  GupbReport report;
  report.is_gupb = true;

  while (true) {
    std::vector<unsigned> masks(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < k; ++i)
      masks[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])] |= 1u << i;
    bool some_block_spans = false;
    for (int j = 0; j < n && !some_block_spans; ++j)
      some_block_spans = cache.spans(j, masks[static_cast<std::size_t>(j)]);
    if (!some_block_spans) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(n));
      for (int i = 0; i < k; ++i)
        blocks[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])].push_back(i);
      report.is_gupb = false;
      report.bad_partition = blocks;
      report.witness = partition_witness(vs, blocks, tol);
      return report;
    }
    // next assignment in lexicographic order
    int pos = k - 1;
    while (pos >= 0 && assign[static_cast<std::size_t>(pos)] == n - 1) {
      assign[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++assign[static_cast<std::size_t>(pos)];
  }
  return report;
}

GupbReport check_gupb_complement(const std::vector<ProductVector>& vs, const Tolerance& tol) {
  require_shared_shape(vs);
  const PartyShape& shape = vs.front().shape;
  if (!shape.all_qubits() || shape.parties() > 3)
    throw UnsupportedShape("check_gupb_complement: needs a 2- or 3-qubit shape");

  GupbReport report;
  const Matrix span = orthonormalize(flat_columns(vs), tol);
  if (span.cols() == shape.total) {
    report.is_gupb = true;  // complement is the zero space
    return report;
  }
  const Matrix complement = kernel_basis(span.adjoint(), tol);
  const EnumerationResult in_complement = enumerate_in_subspace(complement, shape, tol);
  if (in_complement.kind == EnumerationKind::finite && in_complement.vectors.empty()) {
    report.is_gupb = true;
  } else {
    report.is_gupb = false;
    if (!in_complement.vectors.empty()) report.witness = in_complement.vectors.front();
  }
  return report;
}

bool product_vectors_independent(const std::vector<ProductVector>& vs, const Tolerance& tol) {
  require_shared_shape(vs);
  return numeric_rank(flat_columns(vs), tol) == static_cast<int>(vs.size());
}

bool product_states_independent(const std::vector<ProductVector>& vs, const Tolerance& tol) {
  require_shared_shape(vs);
  const int d = vs.front().shape.total;
  Matrix cols(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vector unit = vs[i].flat / vs[i].flat.norm();
    const Matrix proj = unit * unit.adjoint();
    cols.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(proj.data(), proj.size());
  }
  return numeric_rank(cols, tol) == static_cast<int>(vs.size());
}

FourGpClassification classify_four_gp(const std::vector<ProductVector>& vs,
                                      const Tolerance& tol) {
  require_shared_shape(vs);
  if (vs.size() != 4 || !(vs.front().shape == PartyShape::of({2, 2, 2})))
    throw ContractViolation("classify_four_gp: exactly four vectors over (2,2,2) required");
  if (!check_general_position(vs, tol).is_gp)
    throw ContractViolation("classify_four_gp: vectors are not in general position");

  static constexpr std::array<std::array<int, 2>, 3> pairings{{{0, 1}, {1, 2}, {2, 0}}};
  FourGpClassification out;
  bool some_rank4 = false;
  for (std::size_t p = 0; p < 3; ++p) {
    Matrix cols(4, 4);
    for (int i = 0; i < 4; ++i) {
      const Vector& a = vs[static_cast<std::size_t>(i)].locals[static_cast<std::size_t>(pairings[p][0])];
      const Vector& b = vs[static_cast<std::size_t>(i)].locals[static_cast<std::size_t>(pairings[p][1])];
      Vector merged(4);
      merged << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
      cols.col(i) = merged;
    }
    out.pairing_ranks[p] = numeric_rank(cols, tol);
    if (out.pairing_ranks[p] == 4) some_rank4 = true;
  }
  out.verdict = some_rank4 ? FourGpVerdict::finite_face : FourGpVerdict::infinite_family;
  return out;
}

FaceCertificate certify_simplicial_face(const std::vector<ProductVector>& vs,
                                        const Tolerance& tol) {
  require_shared_shape(vs);
  const PartyShape& shape = vs.front().shape;
  if (!shape.all_qubits() || shape.parties() > 3)
    throw UnsupportedShape("certify_simplicial_face: needs a 2- or 3-qubit shape");
  if (vs.size() > 6)
    throw ContractViolation("certify_simplicial_face: at most six vectors supported");

  FaceCertificate cert;
  cert.k = static_cast<int>(vs.size());
  cert.states_independent = product_states_independent(vs, tol);
  const Matrix span = orthonormalize(flat_columns(vs), tol);
  cert.enumeration = enumerate_in_subspace(span, shape, tol);

  if (cert.enumeration.kind == EnumerationKind::infinite) {
    cert.verdict = FaceVerdict::infinite_family;
    return cert;
  }
  bool exactly_inputs = cert.enumeration.vectors.size() == vs.size();
  if (exactly_inputs) {
    for (const auto& z : cert.enumeration.vectors) {
      bool matched = false;
      for (const auto& v : vs)
        if (projectively_equal(z, v, tol)) {
          matched = true;
          break;
        }
      if (!matched) {
        exactly_inputs = false;
        break;
      }
    }
  }
  cert.verdict = (cert.states_independent && exactly_inputs) ? FaceVerdict::simplicial_face
                                                             : FaceVerdict::not_simplicial_face;
  return cert;
}

bool five_subset_independence(const std::vector<ProductVector>& six, const Tolerance& tol) {
  require_shared_shape(six);
  if (six.size() != 6 || !(six.front().shape == PartyShape::of({2, 2, 2})))
    throw ContractViolation("five_subset_independence: exactly six vectors over (2,2,2) required");
  for (int skip = 0; skip < 6; ++skip) {
    std::vector<ProductVector> five;
    for (int i = 0; i < 6; ++i)
      if (i != skip) five.push_back(six[static_cast<std::size_t>(i)]);
    if (!product_vectors_independent(five, tol)) return false;
  }
  return true;
}

}  // namespace pvkit
