#pragma once
// Independent oracles and generators shared by the test binaries.
#include <random>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "ncr/expr.hpp"
#include "ncr/json_io.hpp"
#include "ncr/pencil.hpp"

namespace ncr::test {

inline std::string fixture(const std::string& name) { return std::string(NCR_FIXTURE_DIR) + "/" + name; }

inline LinearPencil load_pencil(const std::string& name) {
  return io::pencil_from_json(io::read_json_file(fixture(name)));
}

// Direct recursive evaluation with LU inverses; returns false when some
// inverted value is numerically singular.
inline bool oracle_eval(const Expr& e, const MatrixPoint& x, Mat& out) {
  const Index n = x.n;
  switch (e.kind()) {
    case Kind::Const:
      out = e.value() * Mat::Identity(n, n);
      return true;
    case Kind::Var:
      out = x.mats[static_cast<std::size_t>(e.var() - 1)];
      return true;
    case Kind::Star: {
      Mat a;
      if (!oracle_eval(e.child(), x.adjoint(), a)) return false;
      out = a.adjoint();
      return true;
    }
    case Kind::Inverse: {
      Mat a;
      if (!oracle_eval(e.child(), x, a)) return false;
      Eigen::JacobiSVD<Mat> svd(a);
      const auto s = svd.singularValues();
      if (s(n - 1) <= 1e-12 * std::max(1.0, s(0))) return false;
      out = a.fullPivLu().inverse();
      return true;
    }
    case Kind::Sum:
    case Kind::Product: {
      Mat a, b;
      if (!oracle_eval(e.lhs(), x, a) || !oracle_eval(e.rhs(), x, b)) return false;
      out = e.kind() == Kind::Sum ? Mat(a + b) : Mat(a * b);
      return true;
    }
  }
  return false;
}

// Smallest singular value of sum_j A_j ⊗ X_j computed entrywise, without kron.
inline double oracle_pencil_sigma(const LinearPencil& l, const MatrixPoint& x) {
  const Index n = x.n;
  Mat m = Mat::Zero(l.d * n, l.e * n);
  for (Index r = 0; r < l.d; ++r)
    for (Index c = 0; c < l.e; ++c) {
      Mat blk = l[0](r, c) * Mat::Identity(n, n);
      for (int j = 1; j <= l.g; ++j) blk += l[j](r, c) * x.mats[static_cast<std::size_t>(j - 1)];
      m.block(r * n, c * n, n, n) = blk;
    }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Random expression trees. With `regular` set, every inverse wraps 1 + q* q
// (defined at every self-adjoint point).
class ExprGen {
 public:
  ExprGen(int g, Field f, std::uint64_t seed, bool regular) : g_(g), f_(f), rng_(seed), regular_(regular) {}

  Expr operator()(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    switch (pick(rng_)) {
      case 0:
        return constant(small_constant());
      case 1:
        return variable(std::uniform_int_distribution<int>(1, g_)(rng_));
      case 2:
        return sum((*this)(depth - 1), (*this)(depth - 1));
      case 3:
        return product((*this)(depth - 1), (*this)(depth - 1));
      case 4:
        if (!regular_) return star((*this)(depth - 1));
        [[fallthrough]];
      default: {
        Expr q = (*this)(depth - 1);
        if (regular_) return inverse(sum(constant(1.0), product(adjoint(q), q)));
        return inverse(q);
      }
    }
  }

 private:
  Scalar small_constant() {
    std::uniform_int_distribution<int> num(-4, 4);
    const double re = num(rng_) * 0.5;
    if (f_ == Field::Complex && num(rng_) > 2) return {re, 0.5 * num(rng_)};
    return {re, 0.0};
  }
  int g_;
  Field f_;
  std::mt19937_64 rng_;
  bool regular_;
};

inline Mat random_matrix(Index r, Index c, Field f, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) m(i, k) = Scalar(n(rng), f == Field::Complex ? n(rng) : 0.0);
  return m;
}

}  // namespace ncr::test
