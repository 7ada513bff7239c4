#include "pvkit/position.hpp"

#include "pvkit/linalg.hpp"
#include "pvkit/registry.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace pvkit;
using namespace pvtest;

namespace {

const PartyShape kThreeQubits = PartyShape::of({2, 2, 2});

std::vector<ProductVector> take(const std::vector<ProductVector>& vs,
                                std::initializer_list<int> idx) {
  std::vector<ProductVector> out;
  for (int i : idx) out.push_back(vs[static_cast<std::size_t>(i)]);
  return out;
}

void check_witness_orthogonal(const GupbReport& report, const std::vector<ProductVector>& vs) {
  REQUIRE(report.witness.has_value());
  for (const auto& v : vs) {
    const double overlap =
        std::abs(Complex(report.witness->flat.dot(v.flat))) / (report.witness->flat.norm() * v.flat.norm());
    CHECK(overlap <= Tolerance{}.residual_abs);
  }
}

}  // namespace

TEST_SUITE_BEGIN("position");

TEST_CASE("general position on the exam-a subsets") {
  const auto zs = load_example("exam-a").load_vectors();

  CHECK(check_general_position(take(zs, {0, 1, 2, 3, 4})).is_gp);
  CHECK(check_general_position(take(zs, {0})).is_gp);

  const GpReport all6 = check_general_position(zs);
  CHECK_FALSE(all6.is_gp);
  REQUIRE(all6.witness.has_value());
  CHECK(all6.witness->indices.size() == 2);
  // the witness pair really is parallel on the named party
  const auto& w = *all6.witness;
  const Vector& a = zs[static_cast<std::size_t>(w.indices[0])].locals[static_cast<std::size_t>(w.party)];
  const Vector& b = zs[static_cast<std::size_t>(w.indices[1])].locals[static_cast<std::size_t>(w.party)];
  CHECK(std::norm(Complex(a.dot(b))) ==
        doctest::Approx(a.squaredNorm() * b.squaredNorm()).epsilon(1e-12));

  CHECK_THROWS_AS(check_general_position({}), ContractViolation);
}

TEST_CASE("gupb partition criterion on exam-a subsets") {
  const auto zs = load_example("exam-a").load_vectors();

  CHECK(check_gupb_partition(take(zs, {0, 1, 2, 3})).is_gupb);  // the UPB

  const GupbReport bad = check_gupb_partition(take(zs, {0, 1, 2, 5}));
  CHECK_FALSE(bad.is_gupb);
  REQUIRE(bad.bad_partition.has_value());
  check_witness_orthogonal(bad, take(zs, {0, 1, 2, 5}));

  // fewer than sum(d_i - 1) + 1 = 4 vectors can never be a GUPB
  CHECK_FALSE(check_gupb_partition(take(zs, {0, 1, 2})).is_gupb);
  CHECK_FALSE(check_gupb_partition(take(zs, {3, 4, 5})).is_gupb);
}

TEST_CASE("gupb complement criterion on the built-in sets") {
  const auto exam_a = load_example("exam-a").load_vectors();
  CHECK(check_gupb_complement(exam_a).is_gupb);  // table row "6 Yes No Yes"

  const auto vec_ex = load_example("vec-ex").load_vectors();
  const GupbReport bad = check_gupb_complement(vec_ex);
  CHECK_FALSE(bad.is_gupb);
  REQUIRE(bad.witness.has_value());
  CHECK(projectively_equal(*bad.witness,
                           *load_example("vec-ex").load_complement_witness()));
  check_witness_orthogonal(bad, vec_ex);
}

TEST_CASE("gupb methods agree on random and adversarial sets") {
  auto rng = make_rng(307);
  std::uniform_int_distribution<int> count(4, 6);
  int gupb_seen = 0, non_gupb_seen = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ProductVector> vs;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) vs.push_back(random_product_vector(rng, kThreeQubits));
    if (trial % 3 == 0) {
      // adversarial: force a shared local somewhere
      const int party = trial % 3;
      vs[1].locals[static_cast<std::size_t>(party)] = vs[0].locals[static_cast<std::size_t>(party)];
      vs[1] = flatten(vs[1].locals, kThreeQubits);
      if (trial % 6 == 0 && k >= 5) {
        vs[3].locals[static_cast<std::size_t>((party + 1) % 3)] =
            vs[2].locals[static_cast<std::size_t>((party + 1) % 3)];
        vs[3] = flatten(vs[3].locals, kThreeQubits);
      }
    }
    const GupbReport by_partition = check_gupb_partition(vs);
    const GupbReport by_complement = check_gupb_complement(vs);
    CHECK(by_partition.is_gupb == by_complement.is_gupb);
    (by_partition.is_gupb ? gupb_seen : non_gupb_seen)++;
    if (!by_partition.is_gupb) check_witness_orthogonal(by_partition, vs);
  }
  CHECK(gupb_seen > 0);
  CHECK(non_gupb_seen > 0);
}

TEST_CASE("gp <-> gupb at the minimum size (both directions)") {
  auto rng = make_rng(311);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ProductVector> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(random_product_vector(rng, kThreeQubits));
    CHECK(check_general_position(vs).is_gp == check_gupb_partition(vs).is_gupb);
  }
  for (int trial = 0; trial < 50; ++trial) {
    // adversarial: a shared local forces both verdicts false
    std::vector<ProductVector> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(random_product_vector(rng, kThreeQubits));
    const int party = trial % 3;
    vs[2].locals[static_cast<std::size_t>(party)] =
        Complex(2.0, 1.0) * vs[3].locals[static_cast<std::size_t>(party)];
    vs[2] = flatten(vs[2].locals, kThreeQubits);
    CHECK_FALSE(check_general_position(vs).is_gp);
    CHECK_FALSE(check_gupb_partition(vs).is_gupb);
  }
}

TEST_CASE("independence of product vectors") {
  auto rng = make_rng(313);
  for (int trial = 0; trial < 50; ++trial)
    CHECK(product_vectors_independent(random_gp_set(rng, kThreeQubits, 4)));

  const auto vec_ex = load_example("vec-ex").load_vectors();
  CHECK_FALSE(product_vectors_independent(vec_ex));

  const auto e111 = zt_family({0});
  CHECK_FALSE(product_vectors_independent({e111[0], e111[0]}));
}

TEST_CASE("independence of product states") {
  const auto exam_a = load_example("exam-a").load_vectors();
  CHECK(product_states_independent(exam_a));

  // The moment family (1,t)^(x)3: seven states span the full seven dimensions
  // available to the family, so they are independent; an eighth must depend.
  CHECK(product_states_independent(zt_family({0, 1, 2, 3, 4, 5, 6})));
  CHECK_FALSE(product_states_independent(zt_family({0, 1, 2, 3, 4, 5, 6, 7})));

  auto rng = make_rng(317);
  CHECK(product_states_independent(random_gp_set(rng, kThreeQubits, 2)));
}

TEST_CASE("vector independence at the k = sum(d_i - 1) + 1 boundary, several shapes") {
  auto rng = make_rng(331);
  for (int trial = 0; trial < 150; ++trial)
    CHECK(product_vectors_independent(random_gp_set(rng, kThreeQubits, 4)));
  const PartyShape four = PartyShape::of({2, 2, 2, 2});
  for (int trial = 0; trial < 150; ++trial)
    CHECK(product_vectors_independent(random_gp_set(rng, four, 5)));
  const PartyShape qubit_qutrit = PartyShape::of({2, 3});
  for (int trial = 0; trial < 150; ++trial)
    CHECK(product_vectors_independent(random_gp_set(rng, qubit_qutrit, 4)));
}

TEST_CASE("state independence at the k = sum 2(d_i - 1) + 1 boundary, three qubits") {
  auto rng = make_rng(337);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(product_states_independent(random_gp_set(rng, kThreeQubits, 7)));
}

TEST_CASE("classify_four_gp: moment quadruple, the UPB, random quadruples") {
  const auto zt = zt_family({1, 2, 3, 4});
  const FourGpClassification moment = classify_four_gp(zt);
  CHECK(moment.verdict == FourGpVerdict::infinite_family);
  CHECK(moment.pairing_ranks == std::array<int, 3>{3, 3, 3});
  const Matrix zt_span = orthonormalize(
      std::vector<Vector>{zt[0].flat, zt[1].flat, zt[2].flat, zt[3].flat});
  CHECK(enumerate_in_subspace(zt_span, kThreeQubits).kind == EnumerationKind::infinite);

  const auto zs = load_example("exam-a").load_vectors();
  const auto upb = take(zs, {0, 1, 2, 3});
  const FourGpClassification upb_class = classify_four_gp(upb);
  CHECK(upb_class.verdict == FourGpVerdict::finite_face);
  const Matrix upb_span = orthonormalize(std::vector<Vector>{
      upb[0].flat, upb[1].flat, upb[2].flat, upb[3].flat});
  const EnumerationResult upb_enum = enumerate_in_subspace(upb_span, kThreeQubits);
  REQUIRE(upb_enum.kind == EnumerationKind::finite);
  CHECK(upb_enum.vectors.size() == 4);

  auto rng = make_rng(347);
  for (int trial = 0; trial < 40; ++trial) {
    const auto vs = random_gp_set(rng, kThreeQubits, 4);
    const FourGpClassification cls = classify_four_gp(vs);
    CHECK(cls.verdict == FourGpVerdict::finite_face);
    const Matrix span = orthonormalize(
        std::vector<Vector>{vs[0].flat, vs[1].flat, vs[2].flat, vs[3].flat});
    const EnumerationResult res = enumerate_in_subspace(span, kThreeQubits);
    REQUIRE(res.kind == EnumerationKind::finite);
    CHECK(res.vectors.size() == 4);
  }

  auto degenerate = take(zs, {0, 1, 2, 5});  // not in general position
  CHECK_THROWS_AS(classify_four_gp(degenerate), ContractViolation);
}

TEST_CASE("certify_simplicial_face across the regimes") {
  auto rng = make_rng(349);

  for (int trial = 0; trial < 20; ++trial) {
    const FaceCertificate cert = certify_simplicial_face(random_gp_set(rng, kThreeQubits, 3));
    CHECK(cert.verdict == FaceVerdict::simplicial_face);
  }

  const auto vec_ex = load_example("vec-ex").load_vectors();
  const FaceCertificate six = certify_simplicial_face(vec_ex);
  CHECK(six.verdict == FaceVerdict::simplicial_face);
  CHECK(six.states_independent);
  CHECK(six.enumeration.vectors.size() == 6);

  const PartyShape two = PartyShape::of({2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const FaceCertificate cert = certify_simplicial_face(random_gp_set(rng, two, 3));
    CHECK(cert.verdict == FaceVerdict::infinite_family);
  }

  const FaceCertificate pair = certify_simplicial_face(random_gp_set(rng, kThreeQubits, 2));
  CHECK(pair.verdict == FaceVerdict::simplicial_face);

  const auto zt = zt_family({1, 2, 3, 4});
  const FaceCertificate moment = certify_simplicial_face(zt);
  CHECK(moment.verdict == FaceVerdict::infinite_family);
}

TEST_CASE("five_subset_independence") {
  CHECK(five_subset_independence(load_example("vec-ex").load_vectors()));
  CHECK(five_subset_independence(load_example("exam-a").load_vectors()));

  auto degenerate = load_example("vec-ex").load_vectors();
  degenerate[5] = degenerate[4];
  CHECK_FALSE(five_subset_independence(degenerate));
}

TEST_CASE("exam-a subset table reproduced for every subset") {
  const auto ex = load_example("exam-a");
  const auto zs = ex.load_vectors();
  for (const auto& row : ex.subset_table) {
    int checked = 0;
    // enumerate all subsets of the row's size and membership pattern
    for (unsigned mask = 0; mask < 64; ++mask) {
      if (__builtin_popcount(mask) != row.size) continue;
      if (bool(mask >> 5 & 1) != row.contains_distinguished) continue;
      std::vector<ProductVector> subset;
      for (int i = 0; i < 6; ++i)
        if (mask >> i & 1) subset.push_back(zs[static_cast<std::size_t>(i)]);
      CHECK(check_general_position(subset).is_gp == row.gp);
      CHECK(check_gupb_partition(subset).is_gupb == row.gupb);
      CHECK(check_gupb_complement(subset).is_gupb == row.gupb);
      ++checked;
    }
    CHECK(checked > 0);
  }
}

TEST_SUITE_END();
