#include <algorithm>
#include <cmath>

#include "gram.hpp"
#include "ncr/positivity.hpp"

namespace ncr {

// Functional Lambda on products W_b* W_c: the Gram SDP dual, plus a small
// multiple of the averaged normalized trace so that Lambda(s* s) > 0 for
// every nonzero s. The GNS point is the compression of left multiplication
// by x_j to the low-degree words.
std::optional<MatrixPoint> mp_counterexample(const RationalExpr& e, int k, double tol, std::uint64_t seed,
                                             std::size_t cap) {
  const RationalBasis basis = basis_of_Vk(e, std::max(k, 1), seed, cap);
  const Index m = static_cast<Index>(basis.size());
  auto pts = detail::sample_basis(e, basis, detail::size_range(6), 40, mix_seed(seed, 1));
  if (pts.empty()) return std::nullopt;

  // Averaged normalized trace moments.
  Mat trace_moments = Mat::Zero(m, m);
  for (const auto& p : pts) {
    const double n = static_cast<double>(p.x.n);
    for (Index b = 0; b < m; ++b)
      for (Index c = 0; c < m; ++c) trace_moments(b, c) += (p.w[b].adjoint() * p.w[c]).trace() / n;
  }
  trace_moments /= static_cast<double>(pts.size());

  Mat moments = trace_moments;  // fallback when the equality system is inconsistent: r is outside span W* W
  const detail::GramSystem gs = detail::gram_system(pts, m, e.field);
  if (gs.consistent) {
    LmiSolution sol = solve_max_min_eig(gs.lmi, SdpOptions{});
    if (sol.status == SdpStatus::NumericalFailure || sol.dual.size() == 0) return std::nullopt;
    // Lambda(W_b* W_c) = Z_{cb}.
    const Mat z = unembed_hermitian(sol.dual, m, e.field);
    const double delta = 1e-4 * std::max(z.norm(), 1e-12);
    moments = z.transpose() + delta * trace_moments;
  }

  // Low words: levels below the top one (at least the constant word).
  std::vector<Index> low;
  for (Index a = 0; a < m; ++a)
    if (basis.levels[a] < std::max(basis.max_level, 1) || a == 0) low.push_back(a);
  const Index nl = static_cast<Index>(low.size());

  // Coordinates of x_j * W_low in W by least squares on the sampled evaluations.
  Index rows = 0;
  for (const auto& p : pts) rows += p.x.n * p.x.n;
  Mat wstack(rows, m);
  {
    Index r0 = 0;
    for (const auto& p : pts) {
      const Index nn = p.x.n * p.x.n;
      for (Index a = 0; a < m; ++a) wstack.block(r0, a, nn, 1) = Eigen::Map<const Vec>(p.w[a].data(), nn);
      r0 += nn;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(wstack);

  Mat gram_low(nl, nl);
  for (Index b = 0; b < nl; ++b)
    for (Index c = 0; c < nl; ++c) gram_low(b, c) = moments(low[b], low[c]);
  gram_low = linalg::real_part(gram_low);
  if (linalg::hermitian_eig(gram_low).eigenvalues(0) <= 0.0) return std::nullopt;
  const Mat is = linalg::inv_sqrt_psd(gram_low);

  std::vector<bool> present(static_cast<std::size_t>(e.nvars) + 1, false);
  for (const auto& a : basis.atoms)
    if (a.kind() == Kind::Var) present[static_cast<std::size_t>(a.var())] = true;

  MatrixPoint x;
  x.field = e.field;
  x.n = nl;
  x.selfadjoint = true;
  for (int j = 1; j <= e.nvars; ++j) {
    if (!present[static_cast<std::size_t>(j)]) {
      x.mats.push_back(Mat::Zero(nl, nl));
      continue;
    }
    Mat target(rows, nl);
    Index r0 = 0;
    for (const auto& p : pts) {
      const Index nn = p.x.n * p.x.n;
      const Mat& xj = p.x.mats[static_cast<std::size_t>(j - 1)];
      for (Index c = 0; c < nl; ++c) {
        const Mat prod = xj * p.w[low[c]];
        target.block(r0, c, nn, 1) = Eigen::Map<const Vec>(prod.data(), nn);
      }
      r0 += nn;
    }
    const Mat t = cod.solve(target);  // m x nl
    const Mat full = moments * t;
    Mat cj(nl, nl);
    for (Index b = 0; b < nl; ++b)
      for (Index c = 0; c < nl; ++c) cj(b, c) = full(low[b], c);
    Mat xj = linalg::real_part(is * cj * is);
    if (e.field == Field::Real) xj = xj.real().cast<Scalar>();
    x.mats.push_back(xj);
  }
  const Mat v = eval_mp(e.root, x);
  const RVec ev = linalg::hermitian_eig(linalg::real_part(v)).eigenvalues;
  if (ev.size() == 0 || ev(0) > -std::sqrt(tol)) return std::nullopt;
  return x;
}

}  // namespace ncr
