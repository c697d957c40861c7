#include "ncr/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncr/kernels.hpp"

namespace ncr {

RMat LmiProblem::at(const RVec& y) const {
  RMat s = base;
  for (Index i = 0; i < k(); ++i) s += y(i) * directions[static_cast<std::size_t>(i)];
  return s;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::OptimalInterior: return "optimal_interior";
    case SdpStatus::OptimalBoundary: return "optimal_boundary";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace {

double min_eig(const RMat& s) {
  if (s.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<RMat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Directions re-expressed in a Frobenius-orthonormal basis G_a = sum_i F_i T(i,a);
// y = T z.
struct Reparam {
  std::vector<RMat> g;
  RMat t;
};

Reparam orthonormalize(const LmiProblem& p) {
  const Index k = p.k(), m = p.m();
  Reparam r;
  if (k == 0) {
    r.t = RMat(0, 0);
    return r;
  }
  RMat gram(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double v = (p.directions[i].array() * p.directions[j].array()).sum();
      gram(i, j) = gram(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<Index> keep;
  for (Index a = 0; a < k; ++a)
    if (es.eigenvalues()(a) > 1e-14 * std::max(top, 1e-300)) keep.push_back(a);
  r.t = RMat(k, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Index a = keep[c];
    r.t.col(static_cast<Index>(c)) = es.eigenvectors().col(a) / std::sqrt(es.eigenvalues()(a));
    RMat ga = RMat::Zero(m, m);
    for (Index i = 0; i < k; ++i) ga += r.t(i, static_cast<Index>(c)) * p.directions[i];
    r.g.push_back(0.5 * (ga + ga.transpose()));
  }
  return r;
}

struct BarrierEval {
  bool ok = false;
  double value = 0.0;
  RVec grad;
  RMat hess;
  RMat w;  // (S - tI)^{-1}
};

// f = -t + mu * ( -log det(S(z) - t I) - log(R^2 - |z|^2) ), variables (z, t).
BarrierEval barrier(const RMat& f0, const std::vector<RMat>& g, const RVec& v, double mu, double radius,
                    bool want_derivs, bool parallel) {
  BarrierEval out;
  const Index m = f0.rows();
  const Index k = static_cast<Index>(g.size());
  const RVec z = v.head(k);
  const double t = v(k);
  const double slack = radius * radius - z.squaredNorm();
  if (slack <= 0.0) return out;
  RMat s = f0 - t * RMat::Identity(m, m);
  for (Index a = 0; a < k; ++a) s += z(a) * g[static_cast<std::size_t>(a)];
  Eigen::LLT<RMat> llt(s);
  if (llt.info() != Eigen::Success) return out;
  const RMat lmat = llt.matrixL();
  double logdet = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (!(lmat(i, i) > 0.0)) return out;
    logdet += 2.0 * std::log(lmat(i, i));
  }
  out.ok = true;
  out.value = -t + mu * (-logdet - std::log(slack));
  if (!want_derivs) return out;

  // P_a = L^{-1} B_a L^{-T}, vectorized as columns, with B_k = -I.
  RMat pcols(m * m, k + 1);
  const auto tri = llt.matrixL();
  for (Index a = 0; a <= k; ++a) {
    RMat b = a < k ? g[static_cast<std::size_t>(a)] : RMat(-RMat::Identity(m, m));
    RMat x = tri.solve(b);
    RMat pa = tri.solve(x.transpose());
    pcols.col(a) = Eigen::Map<const RVec>(pa.data(), m * m);
  }
  RMat h1 = parallel ? kernels::gram_parallel(pcols) : kernels::gram_serial(pcols);
  RVec g1(k + 1);
  for (Index a = 0; a <= k; ++a) {
    double tr = 0.0;
    for (Index i = 0; i < m; ++i) tr += pcols(i * m + i, a);
    g1(a) = -tr;
  }
  out.grad = mu * g1;
  out.grad(k) -= 1.0;
  out.hess = mu * h1;
  if (k > 0) {
    out.grad.head(k) += mu * 2.0 * z / slack;
    out.hess.topLeftCorner(k, k) += mu * (2.0 / slack * RMat::Identity(k, k) + 4.0 / (slack * slack) * z * z.transpose());
  }
  out.w = tri.transpose().solve(tri.solve(RMat::Identity(m, m)));
  return out;
}

}  // namespace

LmiSolution solve_max_min_eig(const LmiProblem& p, const SdpOptions& opts) {
  LmiSolution sol;
  const Index m = p.m();
  if (m == 0) {
    sol.status = SdpStatus::Infeasible;
    sol.message = "empty matrix";
    return sol;
  }
  const RMat f0 = 0.5 * (p.base + p.base.transpose());
  const Reparam rp = orthonormalize(p);
  const Index k = static_cast<Index>(rp.g.size());

  RVec v = RVec::Zero(k + 1);
  v(k) = min_eig(f0) - 1.0;
  // Scale the barrier weight with the data so that the first centering is cheap.
  double mu = std::max(1.0, std::abs(v(k)));
  const double target = opts.tol / (static_cast<double>(m) + 1.0);
  int steps = 0;
  BarrierEval cur;
  bool failed = false;

  while (true) {
    // Centering at this mu.
    int inner = 0;
    for (;;) {
      cur = barrier(f0, rp.g, v, mu, opts.ball_radius, true, opts.parallel);
      if (!cur.ok) {
        failed = true;
        break;
      }
      Eigen::LDLT<RMat> ldlt(cur.hess + 1e-14 * RMat::Identity(k + 1, k + 1));
      RVec dv = -ldlt.solve(cur.grad);
      const double dec2 = -cur.grad.dot(dv);
      if (!std::isfinite(dec2)) {
        failed = true;
        break;
      }
      if (dec2 < 1e-8 * mu || dec2 < 1e-15) break;
      // Roundoff can keep the decrement from shrinking further; a stalled centering
      // still leaves a strictly feasible point, so move on to the next mu.
      if (++inner > opts.max_newton) break;
      ++steps;
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        BarrierEval trial = barrier(f0, rp.g, v + alpha * dv, mu, opts.ball_radius, false, opts.parallel);
        if (trial.ok && trial.value <= cur.value - 0.25 * alpha * dec2) {
          v += alpha * dv;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;  // cannot make progress: treat as centered
    }
    if (failed) break;
    if (mu * static_cast<double>(m) < target) break;
    mu *= opts.mu_factor;
  }

  sol.newton_steps = steps;
  const RVec z = v.head(k);
  sol.y = k > 0 ? RVec(rp.t * z) : RVec::Zero(p.k());
  sol.primal = p.at(sol.y);
  sol.primal = 0.5 * (sol.primal + sol.primal.transpose());
  sol.t_star = min_eig(sol.primal);
  if (failed || !cur.ok) {
    sol.status = SdpStatus::NumericalFailure;
    sol.message = "barrier evaluation failed";
    return sol;
  }
  RMat zmat = 0.5 * (cur.w + cur.w.transpose());
  zmat /= zmat.trace();
  sol.dual = zmat;
  if (sol.t_star > opts.tol)
    sol.status = SdpStatus::OptimalInterior;
  else if (sol.t_star >= -opts.tol)
    sol.status = SdpStatus::OptimalBoundary;
  else
    sol.status = SdpStatus::Infeasible;
  return sol;
}

LmiSolution max_rank_feasible(const LmiProblem& p, const SdpOptions& opts) {
  const Index m = p.m(), k = p.k();
  // Facial reduction driven by the dual: a feasible S(y) >= 0 with tr(Z S(y)) ~ 0
  // must satisfy S(y) Z = 0, so the dominant eigenspace of Z is pinned into the
  // kernel exactly and the problem is re-solved on the smaller face.
  RVec y0 = RVec::Zero(k);
  RMat nbasis = RMat::Identity(k, k);
  RMat exposed(m, 0);
  RMat comp = RMat::Identity(m, m);
  int steps = 0;
  auto combo = [&](const RVec& w) {
    RMat s = RMat::Zero(m, m);
    for (Index i = 0; i < k; ++i)
      if (w(i) != 0.0) s += w(i) * p.directions[static_cast<std::size_t>(i)];
    return s;
  };
  auto finish = [&](const RVec& y, SdpStatus st, std::string msg) {
    LmiSolution sol;
    sol.status = st;
    sol.y = y;
    sol.primal = p.at(y);
    sol.primal = 0.5 * (sol.primal + sol.primal.transpose());
    sol.t_star = min_eig(sol.primal);
    sol.newton_steps = steps;
    sol.message = std::move(msg);
    return sol;
  };
  for (Index round = 0; round <= m; ++round) {
    if (exposed.cols() == m) return finish(y0, SdpStatus::OptimalBoundary, "only S(y) = 0 is feasible");
    LmiProblem face;
    face.base = comp.transpose() * p.at(y0) * comp;
    for (Index c = 0; c < nbasis.cols(); ++c)
      face.directions.push_back(comp.transpose() * combo(nbasis.col(c)) * comp);
    LmiSolution fs = solve_max_min_eig(face, opts);
    steps += fs.newton_steps;
    if (fs.status == SdpStatus::NumericalFailure) {
      fs.newton_steps = steps;
      return fs;
    }
    const RVec y = y0 + nbasis * fs.y;
    if (fs.t_star > opts.tol) {
      LmiSolution sol = finish(y, round == 0 ? SdpStatus::OptimalInterior : SdpStatus::OptimalBoundary, "");
      if (round == 0) sol.dual = fs.dual;
      return sol;
    }
    if (fs.t_star < -opts.tol) {
      if (round == 0) {
        LmiSolution sol = finish(y, SdpStatus::OptimalBoundary, "");
        sol.t_star = fs.t_star;
        sol.dual = fs.dual;
        return sol;
      }
      return finish(y, SdpStatus::NumericalFailure, "facial reduction lost feasibility");
    }
    Eigen::SelfAdjointEigenSolver<RMat> ze(fs.dual);
    const double zmax = ze.eigenvalues().maxCoeff();
    std::vector<Index> keep;
    for (Index i = 0; i < ze.eigenvalues().size(); ++i)
      if (ze.eigenvalues()(i) > 1e-2 * zmax) keep.push_back(i);
    const Index q = static_cast<Index>(keep.size());
    RMat e(m, q);
    for (Index c = 0; c < q; ++c) e.col(c) = comp * ze.eigenvectors().col(keep[static_cast<std::size_t>(c)]);
    // S(y + nbasis w) E = 0, solved in the least-squares sense.
    const Index kk = nbasis.cols();
    const RMat sy = p.at(y);
    const RMat s0 = sy * e;
    const RVec rhs = -Eigen::Map<const RVec>(s0.data(), m * q);
    RMat a(m * q, kk);
    for (Index c = 0; c < kk; ++c) {
      const RMat col = combo(nbasis.col(c)) * e;
      a.col(c) = Eigen::Map<const RVec>(col.data(), m * q);
    }
    const RVec w = kk > 0 ? RVec(a.completeOrthogonalDecomposition().solve(rhs)) : RVec(0);
    const double resid = kk > 0 ? (a * w - rhs).norm() : rhs.norm();
    if (resid > 1e-6 * (1.0 + sy.norm()))
      return finish(y, SdpStatus::NumericalFailure, "exposed face is inconsistent with the affine family");
    y0 = kk > 0 ? RVec(y + nbasis * w) : y;
    if (kk > 0) nbasis = nbasis * linalg::null_space(a, 1e-10);
    RMat grown(m, exposed.cols() + q);
    grown << exposed, e;
    exposed = linalg::orthonormal_columns(grown.cast<Scalar>(), 1e-9).real();
    comp = exposed.cols() < m ? linalg::null_space(exposed.transpose(), 1e-10) : RMat(m, 0);
  }
  return finish(y0, SdpStatus::NumericalFailure, "facial reduction did not terminate");
}

AffineSubspace eliminate_equalities(Index vars, const RMat& equalities, const RVec& normalization,
                                    double value) {
  AffineSubspace out;
  const RMat hom = equalities.rows() ? linalg::null_space(equalities, 1e-10) : RMat(RMat::Identity(vars, vars));
  out.homogeneous_dim = hom.cols();
  // Normalization restricted to the homogeneous solutions.
  const RVec nh = hom.transpose() * normalization;
  if (nh.norm() <= 1e-12 * std::max(1.0, normalization.norm())) {
    out.feasible = false;
    out.point = RVec::Zero(vars);
    out.directions = RMat(vars, 0);
    return out;
  }
  out.feasible = true;
  out.point = hom * (nh * (value / nh.squaredNorm()));
  RMat within = linalg::null_space(nh.transpose(), 1e-12);  // hom.cols() x (hom.cols()-1)
  out.directions = hom * within;
  return out;
}

Index hermitian_coords_size(Index m, Field field) {
  return field == Field::Real ? m * (m + 1) / 2 : m * m;
}

RVec hermitian_coords(const Mat& h, Field field) {
  const Index m = h.rows();
  RVec out(hermitian_coords_size(m, field));
  const double r2 = std::sqrt(2.0);
  Index pos = 0;
  for (Index i = 0; i < m; ++i) out(pos++) = h(i, i).real();
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) out(pos++) = r2 * h(i, j).real();
  if (field == Field::Complex)
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) out(pos++) = r2 * h(i, j).imag();
  return out;
}

Mat hermitian_from_coords(const RVec& x, Index m, Field field) {
  Mat out = Mat::Zero(m, m);
  const double r2 = std::sqrt(0.5);
  Index pos = 0;
  for (Index i = 0; i < m; ++i) out(i, i) = x(pos++);
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) out(i, j) = r2 * x(pos++);
  if (field == Field::Complex)
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) out(i, j) += Scalar(0.0, r2 * x(pos++));
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) out(j, i) = std::conj(out(i, j));
  return out;
}

RMat embed_hermitian(const Mat& h, Field field) {
  if (field == Field::Real) return linalg::real_part(h).real();
  RMat e = linalg::real_embedding(linalg::real_part(h));
  return 0.5 * (e + e.transpose());
}

Mat unembed_hermitian(const RMat& s, Index m, Field field) {
  if (field == Field::Real) return s.cast<Scalar>();
  const RMat re = 0.5 * (s.topLeftCorner(m, m) + s.bottomRightCorner(m, m));
  const RMat im = 0.5 * (s.bottomLeftCorner(m, m) - s.topRightCorner(m, m));
  Mat out(m, m);
  out.real() = re;
  out.imag() = im;
  return linalg::real_part(out);
}

}  // namespace ncr
