#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsat/generator.hpp"
#include "qsat/hamiltonian.hpp"
#include "qsat/rng.hpp"

using namespace qsat;

namespace {

Matrix4 diag4(double a, double b, double c, double d) {
  Matrix4 m = Matrix4::Zero();
  m.diagonal() << a, b, c, d;
  return m;
}

Matrix4 random_psd4(CounterRng& rng, int rank) {
  Matrix4 m = Matrix4::Zero();
  for (int r = 0; r < rank; ++r) {
    Vector4 v;
    for (int i = 0; i < 4; ++i) v(i) = rng.next_complex_normal();
    m += (0.5 + rng.next_double()) * (v * v.adjoint()).eval();
  }
  return m;
}

// Column space equality via projector distance.
bool same_span(const std::vector<ComplexVector>& x, const std::vector<ComplexVector>& y) {
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  auto proj = [](const std::vector<ComplexVector>& basis) {
    ComplexMatrix p = ComplexMatrix::Zero(basis[0].size(), basis[0].size());
    for (const auto& v : basis) p += v * v.adjoint();
    return p;
  };
  return (proj(x) - proj(y)).cwiseAbs().maxCoeff() < 1e-8;
}

}  // namespace

TEST_CASE("rescale_to_zero_ground") {
  CHECK((rescale_to_zero_ground(Matrix4::Zero()) - Matrix4::Zero()).cwiseAbs().maxCoeff() == 0.0);
  Matrix4 shifted = rescale_to_zero_ground(diag4(3, 5, 5, 9));
  CHECK((shifted - diag4(0, 2, 2, 6)).cwiseAbs().maxCoeff() < 1e-12);

  // The literal rescale of the XX interaction (sx sx + sy sy)/2; its kernel is
  // the singlet line, one dimension, unlike the rank-2 golden-model term.
  Matrix4 xx = Matrix4::Zero();
  xx(1, 2) = 1.0;
  xx(2, 1) = 1.0;
  Matrix4 r = rescale_to_zero_ground(xx);
  CHECK(operator_rank(r) == 3);
  CHECK((r * singlet()).norm() < 1e-12);
}

TEST_CASE("projectorize") {
  Matrix4 p = projectorize(diag4(0, 2, 2, 6));
  CHECK((p - diag4(0, 1, 1, 1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);  // idempotent

  Matrix4 sp = Matrix4(projector(Vector4(singlet())));
  CHECK((projectorize(sp) - sp).cwiseAbs().maxCoeff() < 1e-12);

  Matrix4 golden = diag4(1, 0, 0, 1);  // already a projector
  CHECK((projectorize(golden) - golden).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(projectorize(diag4(1, 2, 2, 3)), Error);  // not rescaled
}

TEST_CASE("rescale then projectorize preserves the kernel") {
  CounterRng rng(71);
  for (int trial = 0; trial < 10000; ++trial) {
    Matrix4 m = random_psd4(rng, 1 + static_cast<int>(rng.next_u64() % 3));
    Matrix4 r = Matrix4(rescale_to_zero_ground(m));
    Matrix4 p = projectorize(r);
    auto kr = kernel_basis(r);
    auto kp = kernel_basis(p);
    REQUIRE(kr.size() == kp.size());
    CHECK(same_span(kr, kp));
  }
}

TEST_CASE("classify_naturality on the worked examples") {
  // Antiferromagnetic Ising pair: excited space span{|00>,|11>} is entangled.
  Matrix4 af = diag4(2, 0, 0, 2);
  auto caf = classify_naturality(af);
  CHECK(caf.natural);
  CHECK(caf.rank == 2);
  REQUIRE(caf.witness.has_value());
  CHECK(entanglement_det(*caf.witness) == doctest::Approx(0.5));
  CHECK((af * *caf.witness).norm() > 0.5);  // witness is excited

  // |1><1| (x) (|0><0| + 2|1><1|): rank 2, product operator, not natural.
  Matrix2 p1 = Matrix2::Zero();
  p1(1, 1) = 1.0;
  Matrix2 eta = Matrix2::Zero();
  eta.diagonal() << 1.0, 2.0;
  auto cr2 = classify_naturality(kron2(p1, eta));
  CHECK_FALSE(cr2.natural);
  CHECK(cr2.rank == 2);

  // |01><01|: product excited state, rank 1, not natural.
  Matrix4 p01 = Matrix4::Zero();
  p01(1, 1) = 1.0;
  auto cr1 = classify_naturality(p01);
  CHECK_FALSE(cr1.natural);
  CHECK(cr1.rank == 1);

  // singlet projector: entangled excited state.
  auto cs = classify_naturality(Matrix4(projector(Vector4(singlet()))));
  CHECK(cs.natural);
  CHECK(cs.rank == 1);

  // any rank-3 term is natural
  CounterRng rng(73);
  for (int t = 0; t < 20; ++t) {
    Matrix4 m = Matrix4(rescale_to_zero_ground(random_psd4(rng, 3)));
    auto c = classify_naturality(m);
    CHECK(c.rank == 3);
    CHECK(c.natural);
    REQUIRE(c.witness.has_value());
    CHECK_FALSE(is_product_state(*c.witness, 1e-6));
  }
}

TEST_CASE("classify_naturality agrees with a sampling oracle on rank-2 images") {
  CounterRng rng(79);
  int natural_seen = 0, nonnatural_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Matrix4 m;
    if (trial % 2 == 0) {
      m = Matrix4(rescale_to_zero_ground(random_psd4(rng, 2)));
    } else {
      Vector2 phi = random_qubit_state(rng);
      Matrix2 eta = Matrix2::Zero();
      Vector2 r0 = random_qubit_state(rng), r1 = random_qubit_state(rng);
      eta += (r0 * r0.adjoint()).eval();
      eta += 2.0 * (r1 * r1.adjoint()).eval();
      m = kron2((phi * phi.adjoint()).eval(), eta);
      m = Matrix4(rescale_to_zero_ground(m));
    }
    auto c = classify_naturality(m);
    if (c.rank != 2) continue;

    // Probabilistic oracle: sample unit vectors in img(t).
    EighResult es = eigh(m);
    std::vector<Vector4> image;
    for (int kk = 0; kk < 4; ++kk)
      if (es.eigenvalues(kk) > 1e-9) image.push_back(es.eigenvectors.col(kk));
    bool any_entangled = false;
    for (int s = 0; s < 1000 && !any_entangled; ++s) {
      Vector4 v = Vector4::Zero();
      for (auto& b : image) v += rng.next_complex_normal() * b;
      v /= v.norm();
      if (schmidt_decompose(v).coefficients[1] > 100 * default_tols().rank) any_entangled = true;
    }
    CHECK(c.natural == any_entangled);
    (c.natural ? natural_seen : nonnatural_seen)++;
  }
  CHECK(natural_seen > 5);
  CHECK(nonnatural_seen > 5);
}

TEST_CASE("substitute_nonnatural_rank2") {
  Matrix2 p1 = Matrix2::Zero();
  p1(1, 1) = 1.0;
  auto sub = substitute_nonnatural_rank2(kron2(p1, Matrix2::Identity()));
  CHECK(sub.slot == 0);
  CHECK((sub.op - p1).cwiseAbs().maxCoeff() < 1e-12);

  // |+><+| (x) diag(1,2) -> |+><+| on the first slot, kernels equal.
  Vector2 plus;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix2 eta = Matrix2::Zero();
  eta.diagonal() << 1.0, 2.0;
  Matrix4 term = kron2((plus * plus.adjoint()).eval(), eta);
  auto s2 = substitute_nonnatural_rank2(term);
  CHECK(s2.slot == 0);
  Matrix4 as_two_spin = kron2(s2.op, Matrix2::Identity());
  CHECK(same_span(kernel_basis(term), kernel_basis(as_two_spin)));

  // mirrored orientation
  Matrix4 mirrored = kron2(eta, (plus * plus.adjoint()).eval());
  auto s3 = substitute_nonnatural_rank2(mirrored);
  CHECK(s3.slot == 1);

  CHECK_THROWS_AS(substitute_nonnatural_rank2(Matrix4(projector(Vector4(singlet())))), Error);
}

TEST_CASE("substitution preserves kernels across random factors") {
  CounterRng rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    Vector2 phi = random_qubit_state(rng);
    Vector2 r0 = random_qubit_state(rng), r1 = random_qubit_state(rng);
    Matrix2 eta = (0.3 + rng.next_double()) * (r0 * r0.adjoint()).eval();
    eta += (0.3 + rng.next_double()) * (r1 * r1.adjoint()).eval();
    if (operator_rank(eta) != 2) continue;  // need full-rank eta
    Matrix4 term = kron2((phi * phi.adjoint()).eval(), eta);
    auto sub = substitute_nonnatural_rank2(term);
    Matrix4 single_lifted = kron2(sub.op, Matrix2::Identity());
    CHECK(same_span(kernel_basis(term), kernel_basis(single_lifted)));
  }
}

TEST_CASE("validate") {
  auto models = golden_examples();
  auto r = validate(models.at("xx4cycle"));
  CHECK(r.valid());
  CHECK(r.connected);

  Hamiltonian disjoint;
  Matrix4 sp = Matrix4(projector(Vector4(singlet())));
  disjoint.add_two_spin("1", "2", sp);
  disjoint.add_two_spin("3", "4", sp);
  disjoint.finalize();
  auto rd = validate(disjoint);
  CHECK(rd.valid());
  CHECK_FALSE(rd.connected);
  REQUIRE(rd.warnings.size() == 1);
  CHECK(rd.warnings[0].find("isolated subsystems") != std::string::npos);
}

TEST_CASE("construction merges duplicate edge terms and drops zeros") {
  Matrix4 sp = Matrix4(projector(Vector4(singlet())));
  Hamiltonian h;
  h.add_two_spin("a", "b", sp);
  h.add_two_spin("b", "a", sp);  // same edge, flipped order (singlet is swap-symmetric)
  h.finalize();
  REQUIRE(h.two_spin_terms().size() == 1);
  CHECK((h.two_spin_terms().begin()->second - 2.0 * sp).cwiseAbs().maxCoeff() < 1e-12);

  Hamiltonian z;
  z.add_vertex("a");
  z.add_vertex("b");
  z.add_two_spin("a", "b", Matrix4::Identity());  // rescales to zero, dropped
  z.finalize();
  CHECK(z.two_spin_terms().empty());
  CHECK(z.spin_count() == 2);
}

TEST_CASE("naturality_report") {
  auto models = golden_examples();
  auto rep = naturality_report(models.at("xx4cycle"));
  CHECK(rep.natural());
  CHECK(rep.terms.size() == 4);

  auto af = naturality_report(models.at("ising-af-pair"));
  CHECK(af.natural());

  Hamiltonian bad;
  Matrix4 p01 = Matrix4::Zero();
  p01(1, 1) = 1.0;
  bad.add_two_spin("1", "2", p01);
  bad.finalize();
  CHECK_FALSE(naturality_report(bad).natural());
}
