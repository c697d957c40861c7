#include <cmath>
#include <random>
#include <unordered_map>

#include "ncr/expr.hpp"

namespace ncr {

MatrixPoint MatrixPoint::zeros(int g, Index n, Field field) {
  MatrixPoint p;
  p.field = field;
  p.n = n;
  p.mats.assign(static_cast<std::size_t>(g), Mat::Zero(n, n));
  p.selfadjoint = true;
  return p;
}

MatrixPoint MatrixPoint::scalars(const std::vector<double>& values, Field field) {
  MatrixPoint p;
  p.field = field;
  p.n = 1;
  for (double v : values) p.mats.push_back(Mat::Constant(1, 1, Scalar(v, 0.0)));
  p.selfadjoint = true;
  return p;
}

MatrixPoint MatrixPoint::shifted(const std::vector<double>& lambda) const {
  MatrixPoint p = *this;
  for (std::size_t j = 0; j < p.mats.size() && j < lambda.size(); ++j)
    p.mats[j] += Scalar(lambda[j], 0.0) * Mat::Identity(n, n);
  return p;
}

MatrixPoint MatrixPoint::adjoint() const {
  if (selfadjoint) return *this;
  MatrixPoint p = *this;
  for (auto& m : p.mats) m = m.adjoint().eval();
  return p;
}

void MatrixPoint::validate() const {
  for (const auto& m : mats) {
    if (m.rows() != n || m.cols() != n) throw InputError("matrix point components must all be n x n");
    if (field == Field::Real && m.imag().cwiseAbs().maxCoeff() > 0.0)
      throw InputError("real matrix point has complex entries");
    if (selfadjoint && (m - m.adjoint()).norm() > 1e-12)
      throw InputError("matrix point flagged self-adjoint has a non-self-adjoint component");
  }
}

MatrixPoint direct_sum(const MatrixPoint& x, const MatrixPoint& y) {
  if (x.g() != y.g()) throw InputError("direct_sum: arity mismatch");
  MatrixPoint p;
  p.field = (x.field == Field::Complex || y.field == Field::Complex) ? Field::Complex : Field::Real;
  p.n = x.n + y.n;
  p.selfadjoint = x.selfadjoint && y.selfadjoint;
  for (int j = 0; j < x.g(); ++j) {
    Mat m = Mat::Zero(p.n, p.n);
    m.topLeftCorner(x.n, x.n) = x.mats[j];
    m.bottomRightCorner(y.n, y.n) = y.mats[j];
    p.mats.push_back(std::move(m));
  }
  return p;
}

namespace {

void check_arity(const Expr& e, const MatrixPoint& x) {
  if (max_variable(e) > x.g())
    throw InputError("expression uses x" + std::to_string(max_variable(e)) + " but the point has " +
                     std::to_string(x.g()) + " components");
  for (const auto& m : x.mats)
    if (m.rows() != x.n || m.cols() != x.n) throw InputError("matrix point has inconsistent sizes");
}

struct Singular {
  Expr where;
};

// Evaluates a DAG once per node. Star children are evaluated at the adjoint
// point by a nested evaluator unless the point is self-adjoint.
template <class InvertFn>
class Evaluator {
 public:
  Evaluator(const MatrixPoint& x, InvertFn invert) : x_(x), invert_(invert) {}

  Mat operator()(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Mat out;
    const Index n = x_.n;
    switch (e.kind()) {
      case Kind::Const: out = e.value() * Mat::Identity(n, n); break;
      case Kind::Var: out = x_.mats[static_cast<std::size_t>(e.var() - 1)]; break;
      case Kind::Sum: out = (*this)(e.lhs()) + (*this)(e.rhs()); break;
      case Kind::Product: out = (*this)(e.lhs()) * (*this)(e.rhs()); break;
      case Kind::Inverse: out = invert_(e.child(), (*this)(e.child())); break;
      case Kind::Star:
        if (x_.selfadjoint) {
          out = (*this)(e.child()).adjoint();
        } else {
          const MatrixPoint xa = x_.adjoint();
          Evaluator nested(xa, invert_);
          out = nested(e.child()).adjoint();
        }
        break;
    }
    memo_.emplace(e.get(), out);
    return out;
  }

 private:
  const MatrixPoint& x_;
  InvertFn invert_;
  std::unordered_map<const Node*, Mat> memo_;
};

}  // namespace

EvalResult eval_strict(const Expr& e, const MatrixPoint& x, const EvalOptions& opts) {
  check_arity(e, x);
  auto invert = [&opts](const Expr& child, const Mat& m) -> Mat {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const double smin = s.size() ? s(s.size() - 1) : 0.0;
    if (smax == 0.0 || smin * opts.cond_threshold <= smax || smin <= opts.abs_floor)
      throw Singular{child};
    return svd.matrixV() * s.cwiseInverse().cast<Scalar>().asDiagonal() * svd.matrixU().adjoint();
  };
  try {
    Evaluator ev(x, invert);
    return {ev(e), {}};
  } catch (const Singular& s) {
    return {std::nullopt, s.where};
  }
}

Mat eval_mp(const Expr& e, const MatrixPoint& x, double pinv_rtol) {
  check_arity(e, x);
  auto invert = [pinv_rtol](const Expr&, const Mat& m) -> Mat { return linalg::pinv(m, pinv_rtol); };
  Evaluator ev(x, invert);
  return ev(e);
}

namespace {

Mat gaussian(Index n, Field field, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = nd(gen);
      const double im = field == Field::Complex ? nd(gen) : 0.0;
      g(i, j) = Scalar(re, im);
    }
  return g;
}

}  // namespace

MatrixPoint random_selfadjoint_point(int g, Index n, Field field, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MatrixPoint p;
  p.field = field;
  p.n = n;
  p.selfadjoint = true;
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (int j = 0; j < g; ++j) {
    Mat a = gaussian(n, field, gen);
    Mat h = scale * (a + a.adjoint());
    h = linalg::real_part(h);
    p.mats.push_back(std::move(h));
  }
  return p;
}

MatrixPoint random_general_point(int g, Index n, Field field, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MatrixPoint p;
  p.field = field;
  p.n = n;
  p.selfadjoint = false;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < g; ++j) p.mats.push_back(scale * gaussian(n, field, gen));
  return p;
}

namespace {

bool all_defined_at(const std::vector<Expr>& es, const std::vector<double>& lambda, Field field) {
  MatrixPoint p = MatrixPoint::scalars(lambda, field);
  EvalOptions opts;
  opts.abs_floor = 1e-8;
  for (const auto& e : es)
    if (!eval_strict(e, p, opts).defined()) return false;
  return true;
}

}  // namespace

std::optional<std::vector<double>> find_common_center(const std::vector<Expr>& es, int g, Field field,
                                                      int attempts, std::uint64_t seed) {
  std::vector<double> lambda(static_cast<std::size_t>(g), 0.0);
  if (all_defined_at(es, lambda, field)) return lambda;
  std::mt19937_64 gen(seed);
  for (int a = 1; a < attempts; ++a) {
    const double radius = 0.5 * (1.0 + 0.25 * a);
    std::uniform_real_distribution<double> ud(-radius, radius);
    for (auto& l : lambda) l = std::round(ud(gen) * 64.0) / 64.0;
    if (all_defined_at(es, lambda, field)) return lambda;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> find_scalar_center(const RationalExpr& e, int attempts,
                                                      std::uint64_t seed) {
  return find_common_center({e.root}, e.nvars, e.field, attempts, seed);
}

}  // namespace ncr
