#include "ncr/realization.hpp"

#include <algorithm>
#include <unordered_map>

namespace ncr {

namespace {

struct Triple {
  Vec c;
  LinearPencil l;
  Vec b;
};

LinearPencil square_zeros(int g, Index d, Field f) { return LinearPencil::zeros(g, d, d, f); }

void check_center(const Triple& t, const Expr& where) {
  const RVec s = linalg::singular_values(t.l[0]);
  if (s.size() == 0 || s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0)))
    throw CenterError("sub-expression " + format(where) + " is not defined at the center", where);
}

class Builder {
 public:
  Builder(int g, Field f) : g_(g), f_(f) {}

  Triple operator()(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Triple t;
    switch (e.kind()) {
      case Kind::Const: {
        t.l = square_zeros(g_, 1, f_);
        t.l[0](0, 0) = 1.0;
        t.c = Vec::Ones(1);
        t.b = Vec::Constant(1, e.value());
        break;
      }
      case Kind::Var: {
        t.l = square_zeros(g_, 2, f_);
        t.l[0] = Mat::Identity(2, 2);
        t.l[e.var()](0, 1) = -1.0;
        t.c = Vec::Unit(2, 0);
        t.b = Vec::Unit(2, 1);
        break;
      }
      case Kind::Sum: {
        const Triple a = (*this)(e.lhs()), c = (*this)(e.rhs());
        const Index d1 = a.l.d, d2 = c.l.d;
        t.l = square_zeros(g_, d1 + d2, f_);
        for (int j = 0; j <= g_; ++j) {
          t.l[j].topLeftCorner(d1, d1) = a.l[j];
          t.l[j].bottomRightCorner(d2, d2) = c.l[j];
        }
        t.c = Vec(d1 + d2);
        t.c << a.c, c.c;
        t.b = Vec(d1 + d2);
        t.b << a.b, c.b;
        break;
      }
      case Kind::Product: {
        const Triple a = (*this)(e.lhs()), c = (*this)(e.rhs());
        const Index d1 = a.l.d, d2 = c.l.d;
        t.l = square_zeros(g_, d1 + d2, f_);
        for (int j = 0; j <= g_; ++j) {
          t.l[j].topLeftCorner(d1, d1) = a.l[j];
          t.l[j].bottomRightCorner(d2, d2) = c.l[j];
        }
        t.l[0].topRightCorner(d1, d2) = -a.b * c.c.adjoint();
        t.c = Vec::Zero(d1 + d2);
        t.c.head(d1) = a.c;
        t.b = Vec::Zero(d1 + d2);
        t.b.tail(d2) = c.b;
        break;
      }
      case Kind::Inverse: {
        const Triple a = (*this)(e.child());
        const Index d = a.l.d;
        t.l = square_zeros(g_, d + 1, f_);
        for (int j = 0; j <= g_; ++j) t.l[j].topLeftCorner(d, d) = a.l[j];
        t.l[0].topRightCorner(d, 1) = a.b;
        t.l[0].bottomLeftCorner(1, d) = a.c.adjoint();
        t.c = -Vec::Unit(d + 1, d);
        t.b = Vec::Unit(d + 1, d);
        break;
      }
      case Kind::Star: {
        const Triple a = (*this)(e.child());
        t.l = adjoint(a.l);
        t.c = a.b;
        t.b = a.c;
        break;
      }
    }
    check_center(t, e);
    memo_.emplace(e.get(), t);
    return t;
  }

 private:
  int g_;
  Field f_;
  std::unordered_map<const Node*, Triple> memo_;
};

// Smallest subspace containing `start` and invariant under every n_j.
Mat invariant_span(const std::vector<Mat>& n, const Vec& start, double atol) {
  const Index d = start.size();
  Mat basis = linalg::orthonormal_columns(start, 1e-9, atol);
  Mat frontier = basis;
  while (frontier.cols() > 0 && basis.cols() < d) {
    Mat cand(d, frontier.cols() * static_cast<Index>(n.size()));
    for (std::size_t j = 0; j < n.size(); ++j)
      cand.middleCols(static_cast<Index>(j) * frontier.cols(), frontier.cols()) = n[j] * frontier;
    for (int pass = 0; pass < 2; ++pass) cand -= basis * (basis.adjoint() * cand);
    frontier = linalg::orthonormal_columns(cand, 1e-9, atol);
    if (frontier.cols() == 0) break;
    Mat grown(d, basis.cols() + frontier.cols());
    grown << basis, frontier;
    basis = grown;
  }
  return basis;
}

Realization zero_realization(int g, Field f, const std::vector<double>& center) {
  Realization r;
  r.field = f;
  r.pencil = LinearPencil::zeros(g, 1, 1, f);
  r.pencil[0](0, 0) = 1.0;
  r.c = Vec::Ones(1);
  r.b = Vec::Zero(1);
  r.center = center;
  return r;
}

}  // namespace

Realization build(const RationalExpr& e, const std::vector<double>& center) {
  if (static_cast<int>(center.size()) != e.nvars) throw InputError("build: center has wrong arity");
  const Expr shifted = shift(e.root, center);
  Builder bld(e.nvars, e.field);
  Triple t = bld(shifted);
  Realization r;
  r.field = e.field;
  r.c = t.c;
  r.b = t.b;
  r.pencil = t.l;
  r.center = center;
  return r;
}

Realization minimize(const Realization& in) {
  const Index d = in.size();
  const RVec s = linalg::singular_values(in.pencil[0]);
  if (d == 0 || s(d - 1) <= 1e-10 * s(0)) throw InputError("minimize: L(0) is ill-conditioned");
  Eigen::PartialPivLU<Mat> lu(in.pencil[0]);
  std::vector<Mat> n;
  double scale = 1.0;
  for (int j = 1; j <= in.g(); ++j) {
    n.push_back(-lu.solve(in.pencil[j]));
    scale = std::max(scale, linalg::spectral_norm(n.back()));
  }
  Vec b = lu.solve(in.b);
  Vec c = in.c;
  const double vscale = std::max({1.0, b.norm(), c.norm()});
  const double atol = 1e-9 * scale * vscale;

  // Controllable part.
  Mat k = invariant_span(n, b, atol);
  if (k.cols() == 0 || c.norm() <= 1e-12 * vscale) return zero_realization(in.g(), in.field, in.center);
  for (auto& m : n) m = (k.adjoint() * m * k).eval();
  b = k.adjoint() * b;
  c = k.adjoint() * c;

  // Observable part.
  std::vector<Mat> nstar;
  for (const auto& m : n) nstar.push_back(m.adjoint());
  Mat o = invariant_span(nstar, c, atol);
  if (o.cols() == 0) return zero_realization(in.g(), in.field, in.center);
  for (auto& m : n) m = (o.adjoint() * m * o).eval();
  b = o.adjoint() * b;
  c = o.adjoint() * c;

  Realization r;
  r.field = in.field;
  r.center = in.center;
  const Index dm = o.cols();
  r.pencil = LinearPencil::zeros(in.g(), dm, dm, in.field);
  r.pencil[0] = Mat::Identity(dm, dm);
  for (int j = 1; j <= in.g(); ++j) r.pencil[j] = -n[static_cast<std::size_t>(j - 1)];
  if (in.field == Field::Real) {
    // Bases are real for real data; drop rounding noise in the imaginary parts.
    for (auto& a : r.pencil.coeffs) a = a.real().cast<Scalar>();
    b = b.real().cast<Scalar>();
    c = c.real().cast<Scalar>();
  }
  r.b = b;
  r.c = c;
  return r;
}

std::optional<Mat> eval_realization(const Realization& r, const MatrixPoint& x, double cond_threshold) {
  if (x.g() != r.g()) throw InputError("eval_realization: arity mismatch");
  std::vector<double> neg(r.center.size());
  std::transform(r.center.begin(), r.center.end(), neg.begin(), [](double v) { return -v; });
  const MatrixPoint y = x.shifted(neg);
  const Mat lx = eval(r.pencil, y);
  const Index n = x.n;
  Eigen::BDCSVD<Mat> svd(lx, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  // Conditioning is measured against the size of the terms of L(Y), not of L(Y) itself.
  double scale = linalg::spectral_norm(r.pencil[0]);
  for (int j = 1; j <= r.g(); ++j)
    scale += linalg::spectral_norm(r.pencil[j]) * linalg::spectral_norm(y.mats[static_cast<std::size_t>(j - 1)]);
  scale = std::max(scale, s.size() ? s(0) : 0.0);
  if (s.size() == 0 || s(s.size() - 1) * cond_threshold <= scale || s(s.size() - 1) == 0.0) return std::nullopt;
  const Mat id = Mat::Identity(n, n);
  const Mat bn = linalg::kron(r.b, id);
  const Mat cn = linalg::kron(r.c, id);
  const Mat sol = svd.solve(bn);
  return Mat(cn.adjoint() * sol);
}

}  // namespace ncr
