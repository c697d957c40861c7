#include <algorithm>
#include <cmath>

#include "ncr/ellipticity.hpp"

namespace ncr {

// Moment data for a singular point: Y_0 > 0 and self-adjoint Y_1..Y_g with
// A_0 Y_0 + sum_j A_j Y_j = 0. With U = Y_0^{1/2} and X_j^T = Y_0^{-1/2} Y_j Y_0^{-1/2}
// one gets (A_0 U + sum_j A_j U X_j^T) = 0, i.e. L(X) vec(U) = 0.
std::optional<MatrixPoint> singular_witness(const LinearPencil& input, double tol, double delta,
                                            const SdpOptions& sdp) {
  input.validate();
  const LinearPencil l = input.d < input.e ? adjoint(input) : input;
  const Index d = l.d, e = l.e;
  const Field f = l.field;
  if (e == 0) return std::nullopt;
  const Index hc = hermitian_coords_size(e, f);
  const Index nv = hc * static_cast<Index>(l.g + 1);
  const Index rows_per = (f == Field::Real ? 1 : 2) * d * e;

  RMat eq(rows_per, nv);
  RVec norm = RVec::Zero(nv);
  for (Index v = 0; v < nv; ++v) {
    const Index block = v / hc;
    RVec unit = RVec::Zero(hc);
    unit(v % hc) = 1.0;
    const Mat y = hermitian_from_coords(unit, e, f);
    const Mat m = l[static_cast<int>(block)] * y;
    RVec col(rows_per);
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < e; ++b) {
        col(a * e + b) = m(a, b).real();
        if (f == Field::Complex) col(d * e + a * e + b) = m(a, b).imag();
      }
    eq.col(v) = col;
    if (block == 0) norm(v) = y.trace().real();
  }
  const double scale = std::max(1.0, eq.cwiseAbs().maxCoeff());
  AffineSubspace sub = eliminate_equalities(nv, eq / scale, norm, 1.0);
  if (!sub.feasible) return std::nullopt;

  auto y0_of = [&](const RVec& x) { return hermitian_from_coords(x.head(hc), e, f); };
  LmiProblem p;
  p.description = "singular point moments";
  p.base = embed_hermitian(y0_of(sub.point), f);
  for (Index c = 0; c < sub.directions.cols(); ++c) p.directions.push_back(embed_hermitian(y0_of(sub.directions.col(c)), f));
  LmiSolution sol = solve_max_min_eig(p, sdp);
  if (sol.status == SdpStatus::NumericalFailure || sol.t_star < delta) return std::nullopt;

  const RVec x = sub.point + sub.directions * sol.y;
  const Mat y0 = y0_of(x);
  const Mat is = linalg::inv_sqrt_psd(y0);
  MatrixPoint pt;
  pt.field = f;
  pt.n = e;
  pt.selfadjoint = true;
  for (int j = 1; j <= l.g; ++j) {
    const Mat yj = hermitian_from_coords(x.segment(static_cast<Index>(j) * hc, hc), e, f);
    Mat xt = is * yj * is;
    pt.mats.push_back(linalg::real_part(xt.conjugate().eval()));
  }
  const Mat lx = eval(input, pt);
  const double smin = linalg::min_singular_value(lx);
  if (smin > std::sqrt(tol) * std::max(1.0, linalg::spectral_norm(lx))) return std::nullopt;
  return pt;
}

}  // namespace ncr
