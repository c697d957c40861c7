#include <doctest.h>

#include <random>

#include "ncr/linalg.hpp"
#include "support.hpp"

using namespace ncr;
using namespace ncr::linalg;

TEST_CASE("pinv satisfies the four Penrose identities") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    const Index r = 1 + trial % 5, c = 1 + (trial / 5) % 5, k = 1 + trial % 3;
    // rank <= k by construction
    const Mat a = test::random_matrix(r, k, f, rng) * test::random_matrix(k, c, f, rng);
    const Mat p = pinv(a);
    const double s = 1.0 + a.norm() * p.norm();
    CHECK((a * p * a - a).norm() <= 1e-9 * s * a.norm());
    CHECK((p * a * p - p).norm() <= 1e-9 * s * p.norm());
    CHECK((a * p - (a * p).adjoint()).norm() <= 1e-9 * s);
    CHECK((p * a - (p * a).adjoint()).norm() <= 1e-9 * s);
  }
}

TEST_CASE("pinv of zero is zero") {
  CHECK(pinv(Mat::Zero(3, 2)).isZero(0.0));
  CHECK(pinv(Mat::Zero(3, 2)).rows() == 2);
}

TEST_CASE("hermitian_eig reconstructs and sorts") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    const Mat b = test::random_matrix(6, 6, f, rng);
    const Mat h = b + b.adjoint();
    const auto es = hermitian_eig(h);
    const Mat rec = es.eigenvectors * es.eigenvalues.cast<Scalar>().asDiagonal() * es.eigenvectors.adjoint();
    CHECK((rec - h).norm() <= 1e-10 * h.norm());
    CHECK((es.eigenvectors.adjoint() * es.eigenvectors - Mat::Identity(6, 6)).norm() <= 1e-12);
    for (Index i = 1; i < 6; ++i) CHECK(es.eigenvalues(i - 1) <= es.eigenvalues(i));
  }
}

TEST_CASE("hermitian_eig rejects non-selfadjoint input") {
  Mat a(2, 2);
  a << 1, 2, 0, 1;
  CHECK_THROWS_AS(hermitian_eig(a), InputError);
}

TEST_CASE("kron mixed product") {
  std::mt19937_64 rng(3);
  const Field f = Field::Complex;
  const Mat a = test::random_matrix(2, 3, f, rng), b = test::random_matrix(3, 2, f, rng);
  const Mat c = test::random_matrix(3, 2, f, rng), d = test::random_matrix(2, 4, f, rng);
  const Mat lhs = kron(a, b) * kron(c, d);
  const Mat rhs = kron(a * c, b * d);
  CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
  // entry layout: (i*rows(b) + k, j*cols(b) + l) = a(i,j) b(k,l)
  const Mat k = kron(a, b);
  CHECK(std::abs(k(1 * 3 + 2, 2 * 2 + 1) - a(1, 2) * b(2, 1)) < 1e-14);
}

TEST_CASE("kernel and null space bases") {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const Mat k = kernel_basis(a);
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(std::abs(k(2, 0)) - 1.0) < 1e-12);

  RMat r(1, 3);
  r << 1, 1, 0;
  const RMat ns = null_space(r);
  CHECK(ns.cols() == 2);
  CHECK((r * ns).norm() < 1e-12);
  CHECK((ns.transpose() * ns - RMat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("singular values and norms agree") {
  std::mt19937_64 rng(5);
  const Mat a = test::random_matrix(4, 3, Field::Real, rng);
  const RVec s = singular_values(a);
  CHECK(std::abs(s(0) - spectral_norm(a)) < 1e-12);
  CHECK(std::abs(s(2) - min_singular_value(a)) < 1e-12);
}

TEST_CASE("square roots of PSD matrices") {
  std::mt19937_64 rng(9);
  const Mat b = test::random_matrix(4, 4, Field::Complex, rng);
  const Mat h = b * b.adjoint() + Mat::Identity(4, 4);
  const Mat s = sqrt_psd(h), is = inv_sqrt_psd(h);
  CHECK((s * s - h).norm() < 1e-10 * h.norm());
  CHECK((is * h * is - Mat::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("real embedding is a homomorphism") {
  std::mt19937_64 rng(13);
  const Mat a = test::random_matrix(3, 3, Field::Complex, rng), b = test::random_matrix(3, 3, Field::Complex, rng);
  CHECK((real_embedding(a * b) - real_embedding(a) * real_embedding(b)).norm() < 1e-12 * (1 + (a * b).norm()));
}
