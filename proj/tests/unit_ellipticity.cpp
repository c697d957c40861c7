#include <doctest.h>

#include <random>

#include "ncr/ellipticity.hpp"
#include "support.hpp"

using namespace ncr;

namespace {
Index rank_of(const RVec& eigs, double tol) {
  Index r = 0;
  for (Index i = 0; i < eigs.size(); ++i) r += eigs(i) > tol ? 1 : 0;
  return r;
}
}  // namespace

TEST_CASE("kernel-step pencil: two-step chain") {
  const LinearPencil l = test::load_pencil("kernel_step_pencil.json");
  const auto c = classify(l);
  REQUIRE(c.verdict == Verdict::Elliptic);
  REQUIRE(c.chain.size() == 2);
  CHECK(c.chain[0].homogeneous_dim == 1);
  REQUIRE(c.chain[0].V.cols() == 1);
  CHECK(std::abs(std::abs(c.chain[0].V(2, 0)) - 1.0) < 1e-8);
  CHECK(verify_certificate(l, c, 1e-7));
  // the restricted column pencil is stably elliptic on its own
  const LinearPencil lv = restrict_columns(l, c.chain[0].V);
  CHECK(classify(lv).verdict == Verdict::StablyElliptic);
}

TEST_CASE("minimal pencils of the worked examples") {
  const LinearPencil l1 = test::load_pencil("example1_pencil.json");
  const auto c1 = classify(l1);
  CHECK(c1.verdict == Verdict::Elliptic);
  REQUIRE(!c1.chain.empty());
  CHECK(rank_of(c1.chain[0].eigs, 1e-6) == 2);
  CHECK(c1.chain[0].homogeneous_dim == 2);
  CHECK(verify_certificate(l1, c1, 1e-7));

  const LinearPencil l2 = test::load_pencil("example2_pencil.json");
  const auto c2 = classify(l2);
  CHECK(c2.verdict == Verdict::StablyElliptic);
  REQUIRE(c2.epsilon);
  CHECK(*c2.epsilon > 0.0);
  CHECK(verify_certificate(l2, c2, 1e-7));

  const LinearPencil l3 = test::load_pencil("example3_pencil.json");
  const auto c3 = classify(l3);
  CHECK(c3.verdict == Verdict::NotElliptic);
  REQUIRE(c3.witness);
  CHECK(linalg::min_singular_value(eval(l3, *c3.witness)) < 1e-5);
  CHECK(verify_certificate(l3, c3, 1e-7));
}

TEST_CASE("trivial pencils") {
  const LinearPencil id = test::load_pencil("identity_pencil.json");
  const auto c = classify(id);
  CHECK(c.verdict == Verdict::StablyElliptic);
  CHECK(*c.epsilon == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(epsilon_bound(Mat::Identity(3, 3), id) == doctest::Approx(1.0));
  EllipticityCertificate manual;
  manual.verdict = Verdict::StablyElliptic;
  manual.chain.push_back({Mat::Identity(3, 3), RVec::Ones(3), Mat(3, 0), 1.0, 1});
  CHECK(verify_certificate(id, manual, 1e-9));

  const auto z = classify(test::load_pencil("zero_pencil.json"));
  CHECK(z.verdict == Verdict::NotElliptic);
  CHECK(verify_certificate(test::load_pencil("zero_pencil.json"), z, 1e-7));

  LinearPencil x = LinearPencil::zeros(1, 1, 1, Field::Real);
  x[1](0, 0) = 1.0;
  const auto cx = classify(x);
  REQUIRE(cx.verdict == Verdict::NotElliptic);
  REQUIRE(cx.witness);
  CHECK(std::abs(cx.witness->mats[0](0, 0)) < 1e-5);
}

TEST_CASE("wide pencils are classified through the adjoint") {
  LinearPencil l = LinearPencil::zeros(1, 1, 2, Field::Real);
  l[0](0, 0) = 1.0;
  l[1](0, 1) = 1.0;
  const auto c = classify(l);
  CHECK(c.transposed);
  CHECK(c.verdict != Verdict::Inconclusive);
  CHECK(verify_certificate(l, c, 1e-7));
}

TEST_CASE("appending a zero-constant column destroys ellipticity") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    LinearPencil l = LinearPencil::zeros(2, 3, 2, Field::Real);
    for (auto& a : l.coeffs) a = test::random_matrix(3, 2, Field::Real, rng);
    l[0].col(1).setZero();
    l[2].col(1).setZero();  // column 2 is x1 * v: singular at X1 = 0
    const auto c = classify(l);
    REQUIRE(c.verdict == Verdict::NotElliptic);
    CHECK(verify_certificate(l, c, 1e-7));
    if (c.witness) CHECK(linalg::min_singular_value(eval(l, *c.witness)) < 1e-5 * (1 + linalg::spectral_norm(eval(l, *c.witness))));
  }
}

TEST_CASE("epsilon lower-bounds sampled singular values") {
  LinearPencil l = LinearPencil::zeros(2, 2, 2, Field::Real);
  l[0] = 2.0 * Mat::Identity(2, 2);
  l[1](0, 1) = 1.0;
  l[1](1, 0) = -1.0;
  l[2](0, 1) = 0.5;
  l[2](1, 0) = -0.5;
  const double eps = epsilon_bound(0.5 * Mat::Identity(2, 2), l);
  for (int s = 0; s < 100; ++s) {
    const MatrixPoint x = random_selfadjoint_point(2, 1 + s % 6, Field::Real, s);
    const double sig = test::oracle_pencil_sigma(l, x);
    CHECK(sig * sig >= eps - 1e-9);
  }
  CHECK_THROWS_AS(epsilon_bound(Mat::Zero(2, 2), l), InputError);
}

TEST_CASE("tampered certificates fail verification") {
  const LinearPencil l1 = test::load_pencil("example1_pencil.json");
  const auto good = classify(l1);
  REQUIRE(verify_certificate(l1, good, 1e-7));

  auto bad = good;
  bad.chain[0].D.setZero();
  CHECK_FALSE(verify_certificate(l1, bad, 1e-7));
  bad = good;
  bad.chain[0].D(0, 0) += 0.3;
  CHECK_FALSE(verify_certificate(l1, bad, 1e-7));
  bad = good;
  bad.chain.pop_back();
  bad.verdict = Verdict::StablyElliptic;
  CHECK_FALSE(verify_certificate(l1, bad, 1e-7));
  bad = good;
  bad.chain.back().V = Mat::Identity(bad.chain.back().D.rows(), 1);
  CHECK_FALSE(verify_certificate(l1, bad, 1e-7));

  const LinearPencil l3 = test::load_pencil("example3_pencil.json");
  auto w = classify(l3);
  REQUIRE(w.witness);
  w.witness->mats[0] += Mat::Identity(w.witness->n, w.witness->n);
  CHECK_FALSE(verify_certificate(l3, w, 1e-7));

  // a "not elliptic" claim with neither witness nor exposing matrices
  EllipticityCertificate lie;
  lie.verdict = Verdict::NotElliptic;
  CHECK_FALSE(verify_certificate(test::load_pencil("identity_pencil.json"), lie, 1e-7));
  lie.exposing.push_back(Mat::Identity(3, 3));
  CHECK_FALSE(verify_certificate(test::load_pencil("identity_pencil.json"), lie, 1e-7));
}

TEST_CASE("verdicts agree with the sampling oracle on random pencils") {
  std::mt19937_64 rng(99);
  int definite = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Field f = trial % 3 == 0 ? Field::Complex : Field::Real;
    const int g = 1 + trial % 3;
    const Index e = 1 + trial % 3, d = e + (trial / 3) % 2;
    LinearPencil l = LinearPencil::zeros(g, d, e, f);
    for (auto& a : l.coeffs) a = test::random_matrix(d, e, f, rng);
    const auto c = classify(l);
    if (c.verdict == Verdict::Inconclusive) continue;
    ++definite;
    CHECK(verify_certificate(l, c, 1e-7));
    if (c.verdict == Verdict::StablyElliptic) {
      const auto s = full_rank_sample(l, {1, 2, 3, 4}, 10, 5 + trial);
      CHECK(s.min_sigma * s.min_sigma >= *c.epsilon - 1e-7);
    }
  }
  CHECK(definite >= 36);
}
