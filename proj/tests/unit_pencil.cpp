#include <doctest.h>

#include <random>

#include "ncr/pencil.hpp"
#include "support.hpp"

using namespace ncr;

TEST_CASE("kron-based evaluation matches the block oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    LinearPencil l = LinearPencil::zeros(2, 3, 2, f);
    for (auto& a : l.coeffs) a = test::random_matrix(3, 2, f, rng);
    const MatrixPoint x = random_selfadjoint_point(2, 1 + trial % 4, f, trial);
    CHECK(std::abs(linalg::min_singular_value(eval(l, x)) - test::oracle_pencil_sigma(l, x)) < 1e-10);
  }
}

TEST_CASE("evaluation at scalar and zero points") {
  const LinearPencil l = test::load_pencil("kernel_step_pencil.json");
  Mat want(3, 3);
  want << 1, 1, 0, -1, 1, 1, 0, -1, 0;
  CHECK((eval(l, MatrixPoint::scalars({1.0, 0.0}, Field::Real)) - want).norm() < 1e-14);
  const Mat z = eval(l, MatrixPoint::zeros(2, 2, Field::Real));
  CHECK((z - linalg::kron(l[0], Mat::Identity(2, 2))).norm() == 0.0);
}

TEST_CASE("evaluation respects direct sums") {
  const LinearPencil l = test::load_pencil("example2_pencil.json");
  const MatrixPoint x = random_selfadjoint_point(2, 2, Field::Real, 1), y = random_selfadjoint_point(2, 3, Field::Real, 2);
  const Mat big = eval(l, direct_sum(x, y));
  const Mat lx = eval(l, x), ly = eval(l, y);
  // canonical shuffle: row (i, a) of L(X ⊕ Y) comes from block i, slot a
  const Index d = l.d, n = 5;
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < l.e; ++k) {
      CHECK((big.block(i * n, k * n, 2, 2) - lx.block(i * 2, k * 2, 2, 2)).norm() < 1e-14);
      CHECK((big.block(i * n + 2, k * n + 2, 3, 3) - ly.block(i * 3, k * 3, 3, 3)).norm() < 1e-14);
      CHECK(big.block(i * n, k * n + 2, 2, 3).norm() == 0.0);
    }
}

TEST_CASE("real_compress on the kernel-step pencil") {
  const LinearPencil l = test::load_pencil("kernel_step_pencil.json");
  const auto re = real_compress(Mat::Identity(3, 3), l);
  Mat want = Mat::Zero(3, 3);
  want(0, 0) = want(1, 1) = 1.0;
  CHECK((re[0] - want).norm() < 1e-14);
  CHECK(re[1].norm() < 1e-14);
  CHECK(re[2].norm() < 1e-14);
  for (const Mat& m : real_compress(Mat::Zero(3, 3), l)) CHECK(m.isZero(0.0));
}

TEST_CASE("restriction and adjoint") {
  const LinearPencil l = test::load_pencil("kernel_step_pencil.json");
  Mat v = Mat::Zero(3, 1);
  v(2, 0) = 1.0;
  const LinearPencil lv = restrict_columns(l, v);
  CHECK(lv.e == 1);
  // (x1 - 1, 1, 0)^T
  CHECK(lv[0](0, 0) == Scalar(-1.0));
  CHECK(lv[0](1, 0) == Scalar(1.0));
  CHECK(lv[0](2, 0) == Scalar(0.0));
  CHECK(lv[1](0, 0) == Scalar(1.0));
  CHECK(lv[2].isZero(0.0));
  CHECK_THROWS_AS(restrict_columns(l, Mat::Zero(3, 1)), InputError);
  const LinearPencil same = restrict_columns(l, Mat::Identity(3, 3));
  for (int j = 0; j <= 2; ++j) CHECK(same[j] == l[j]);

  const LinearPencil c = test::load_pencil("example1_pencil.json");
  const LinearPencil cc = adjoint(adjoint(c));
  for (int j = 0; j <= c.g; ++j) CHECK(cc[j] == c[j]);
  const MatrixPoint x = random_selfadjoint_point(2, 3, Field::Real, 4);
  CHECK((eval(adjoint(c), x) - eval(c, x).adjoint()).norm() < 1e-13);
}

TEST_CASE("full-rank sampling oracle") {
  LinearPencil one = LinearPencil::zeros(1, 1, 1, Field::Real);
  one[0](0, 0) = 1.0;
  auto s = full_rank_sample(one, {1, 2, 3}, 10, 1);
  CHECK(s.min_sigma == doctest::Approx(1.0));
  CHECK(s.samples == 30);

  LinearPencil x = LinearPencil::zeros(1, 1, 1, Field::Real);
  x[1](0, 0) = 1.0;
  CHECK(linalg::min_singular_value(eval(x, MatrixPoint::zeros(1, 1, Field::Real))) == 0.0);

  const LinearPencil ex2 = test::load_pencil("example2_pencil.json");
  s = full_rank_sample(ex2, {1, 2, 3, 4, 5, 6}, 34, 3);
  CHECK(s.min_sigma > 0.05);
}

TEST_CASE("joint nilpotency") {
  LinearPencil l = LinearPencil::zeros(1, 2, 2, Field::Real);
  l[0] = Mat::Identity(2, 2);
  l[1](0, 1) = 1.0;
  CHECK(jointly_nilpotent(l));
  LinearPencil m = LinearPencil::zeros(1, 1, 1, Field::Real);
  m[0](0, 0) = 1.0;
  m[1](0, 0) = -1.0;
  CHECK_FALSE(jointly_nilpotent(m));

  // conjugated strictly upper triangular family
  std::mt19937_64 rng(8);
  const Index d = 4;
  const Mat s = test::random_matrix(d, d, Field::Real, rng) + 3.0 * Mat::Identity(d, d);
  LinearPencil n = LinearPencil::zeros(3, d, d, Field::Real);
  n[0] = s;
  for (int j = 1; j <= 3; ++j) {
    Mat u = test::random_matrix(d, d, Field::Real, rng).triangularView<Eigen::StrictlyUpper>();
    n[j] = s * u;
  }
  CHECK(jointly_nilpotent(n));
}

TEST_CASE("validate rejects mismatched shapes") {
  LinearPencil l = LinearPencil::zeros(1, 2, 2, Field::Real);
  l.coeffs[1] = Mat::Zero(2, 3);
  CHECK_THROWS_AS(l.validate(), InputError);
}
