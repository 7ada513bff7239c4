#pragma once

#include "pvkit/enumerate.hpp"
#include "pvkit/states.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pvkit {

struct GpReport {
  struct Witness {
    int party = 0;                // 0-based
    std::vector<int> indices;     // subset with deficient local rank
  };
  bool is_gp = false;
  std::optional<Witness> witness;  // present exactly when not GP
};

/// General position: for every party j, every subset of at most d_j of the
/// j-th locals is linearly independent. For qubit parties this is pairwise
/// non-parallelism. The witness is the first deficient subset in
/// (party, size, lexicographic indices) order.
GpReport check_general_position(const std::vector<ProductVector>& vs,
                                const Tolerance& tol = {});

struct GupbReport {
  bool is_gupb = false;
  std::optional<std::vector<std::vector<int>>> bad_partition;  // blocks I_1..I_n
  std::optional<ProductVector> witness;                        // orthogonal product vector
};

/// Generalized unextendible product basis via the partition criterion: scans
/// all n^k labeled partitions (empty blocks never span); GUPB exactly when
/// every partition has a block spanning its party space. On failure returns
/// the first failing partition in lexicographic assignment order along with
/// the orthogonal product vector it induces.
GupbReport check_gupb_partition(const std::vector<ProductVector>& vs,
                                const Tolerance& tol = {});

/// GUPB via the definition: the orthogonal complement of the span has no
/// product vector. Qubit parties with n <= 3 only (delegates to enumeration).
GupbReport check_gupb_complement(const std::vector<ProductVector>& vs,
                                 const Tolerance& tol = {});

/// Rank of the flattened vectors equals their count.
bool product_vectors_independent(const std::vector<ProductVector>& vs,
                                 const Tolerance& tol = {});

/// Rank of the vectorized projectors |z_i><z_i| equals their count.
bool product_states_independent(const std::vector<ProductVector>& vs,
                                const Tolerance& tol = {});

enum class FourGpVerdict { finite_face, infinite_family };

struct FourGpClassification {
  FourGpVerdict verdict = FourGpVerdict::finite_face;
  std::array<int, 3> pairing_ranks{};  // pairings (1,2), (2,3), (3,1)
};

/// Classification of four three-qubit product vectors in general position:
/// a finite face when some two-party pairing of the locals has rank 4, an
/// infinite family exactly when all three pairings have rank 3.
FourGpClassification classify_four_gp(const std::vector<ProductVector>& vs,
                                      const Tolerance& tol = {});

enum class FaceVerdict { simplicial_face, not_simplicial_face, infinite_family };

struct FaceCertificate {
  int k = 0;
  bool states_independent = false;
  EnumerationResult enumeration;
  FaceVerdict verdict = FaceVerdict::not_simplicial_face;
};

/// Unique-decomposition certificate: simplicial-face exactly when the product
/// states are linearly independent and the span contains no product vectors
/// beyond the inputs (projectively). Qubit parties, n <= 3, k <= 6.
FaceCertificate certify_simplicial_face(const std::vector<ProductVector>& vs,
                                        const Tolerance& tol = {});

/// All six 5-subsets of six three-qubit product vectors have flat rank 5.
bool five_subset_independence(const std::vector<ProductVector>& six,
                              const Tolerance& tol = {});

}  // namespace pvkit
