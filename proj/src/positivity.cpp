#include "ncr/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gram.hpp"
#include "ncr/kernels.hpp"

namespace ncr {

namespace detail {

std::vector<Index> size_range(Index max_size) {
  std::vector<Index> s;
  for (Index n = 1; n <= max_size; ++n) s.push_back(n);
  return s;
}

namespace {

// Atom values at x, or nullopt if some atom is undefined there.
std::optional<std::vector<Mat>> atom_values(const RationalBasis& basis, const MatrixPoint& x) {
  std::vector<Mat> out;
  for (const auto& a : basis.atoms) {
    EvalResult v = eval_strict(a, x);
    if (!v.defined()) return std::nullopt;
    out.push_back(*v.value);
  }
  return out;
}

std::vector<Mat> word_values(const RationalBasis& basis, const std::vector<Mat>& atoms, Index n) {
  std::vector<Mat> w(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    w[i] = basis.parent[i] < 0 ? Mat(Mat::Identity(n, n))
                               : Mat(atoms[static_cast<std::size_t>(basis.atom[i])] * w[static_cast<std::size_t>(basis.parent[i])]);
  return w;
}

}  // namespace

std::vector<SampledPoint> sample_basis(const RationalExpr& r, const RationalBasis& basis,
                                       const std::vector<Index>& sizes, int per_size, std::uint64_t seed) {
  std::vector<SampledPoint> out;
  for (Index n : sizes) {
    int got = 0;
    for (int attempt = 0; got < per_size && attempt < 4 * per_size + 10; ++attempt) {
      const MatrixPoint x = random_selfadjoint_point(r.nvars, n, r.field,
                                                     mix_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(attempt)));
      auto av = atom_values(basis, x);
      if (!av) continue;
      EvalResult rv = eval_strict(r.root, x);
      if (!rv.defined()) continue;
      out.push_back({x, word_values(basis, *av, n), *rv.value});
      ++got;
    }
  }
  return out;
}

Mat GramSystem::gram(const RVec& z) const {
  RVec x = point;
  if (z.size()) x += directions * z;
  return hermitian_from_coords(x, m, field);
}

GramSystem gram_system(const std::vector<SampledPoint>& pts, Index m, Field field) {
  GramSystem gs;
  gs.field = field;
  gs.m = m;
  const Index nv = hermitian_coords_size(m, field);
  Index rows = 0;
  for (const auto& p : pts) rows += hermitian_coords_size(p.x.n, field);
  RMat e(rows, nv);
  RVec rhs(rows);
  Index row = 0;
  for (const auto& p : pts) {
    const Index n = p.x.n;
    const Index h = hermitian_coords_size(n, field);
    const double w = 1.0 / (1.0 + p.r.norm());
    // Column for each Hermitian coordinate of G, via hermitian_from_coords of a unit vector.
    Index col = 0;
    const double r2 = std::sqrt(0.5);
    for (Index a = 0; a < m; ++a, ++col) e.block(row, col, h, 1) = w * hermitian_coords(p.w[a].adjoint() * p.w[a], field);
    for (Index a = 0; a < m; ++a)
      for (Index b = a + 1; b < m; ++b, ++col) {
        const Mat ab = p.w[a].adjoint() * p.w[b];
        e.block(row, col, h, 1) = w * r2 * hermitian_coords(ab + ab.adjoint(), field);
      }
    if (field == Field::Complex)
      for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b, ++col) {
          const Mat ab = p.w[a].adjoint() * p.w[b];
          e.block(row, col, h, 1) = w * r2 * hermitian_coords(Scalar(0.0, 1.0) * (ab - ab.adjoint()), field);
        }
    rhs.segment(row, h) = w * hermitian_coords(linalg::real_part(p.r), field);
    row += h;
  }
  Eigen::BDCSVD<RMat> svd(e, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double cutoff = 1e-9 * std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  const RMat& v = svd.matrixV();
  const RMat& u = svd.matrixU();
  RVec coef = (u.leftCols(rank).transpose() * rhs).cwiseQuotient(s.head(rank));
  gs.point = v.leftCols(rank) * coef;
  gs.directions = v.rightCols(nv - rank);
  gs.relative_residual = (e * gs.point - rhs).norm() / (1.0 + rhs.norm());
  gs.consistent = gs.relative_residual <= 1e-7;
  gs.lmi.description = "Gram matrix";
  gs.lmi.base = embed_hermitian(hermitian_from_coords(gs.point, m, field), field);
  for (Index c = 0; c < gs.directions.cols(); ++c)
    gs.lmi.directions.push_back(embed_hermitian(hermitian_from_coords(gs.directions.col(c), m, field), field));
  return gs;
}

}  // namespace detail

using detail::GramSystem;
using detail::SampledPoint;

namespace {

std::vector<Expr> atoms_of(const RationalExpr& e) {
  std::set<int> vars;
  auto collect = [&](auto&& self, const Expr& x) -> void {
    switch (x.kind()) {
      case Kind::Const: break;
      case Kind::Var: vars.insert(x.var()); break;
      case Kind::Sum:
      case Kind::Product:
        self(self, x.lhs());
        self(self, x.rhs());
        break;
      case Kind::Inverse:
      case Kind::Star: self(self, x.child()); break;
    }
  };
  collect(collect, e.root);
  std::vector<Expr> out;
  for (int v : vars) out.push_back(variable(v));
  for (const auto& q : subexpressions(e.root, true))
    if (q.kind() == Kind::Inverse) out.push_back(q);
  return out;
}

// Greedy independence filter on stacked evaluations.
class IndependenceFilter {
 public:
  explicit IndependenceFilter(double rtol) : rtol_(rtol) {}

  bool try_add(const Vec& v) {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : q_) r -= q * q.dot(r);
    const double nv = v.norm();
    if (nv == 0.0 || r.norm() <= rtol_ * nv) return false;
    min_rel_ = std::min(min_rel_, r.norm() / nv);
    q_.push_back(r / r.norm());
    return true;
  }
  void pop(std::size_t count) { q_.resize(q_.size() - count); }
  std::size_t size() const { return q_.size(); }
  double min_relative() const { return min_rel_; }

 private:
  double rtol_;
  double min_rel_ = 1.0;
  std::vector<Vec> q_;
};

Vec stack(const std::vector<Mat>& vals) {
  Index len = 0;
  for (const auto& m : vals) len += m.size();
  Vec out(len);
  Index pos = 0;
  for (const auto& m : vals) {
    out.segment(pos, m.size()) = Eigen::Map<const Vec>(m.data(), m.size());
    pos += m.size();
  }
  return out;
}

}  // namespace

RationalBasis basis_of_Vk(const RationalExpr& e, int k, std::uint64_t seed, std::size_t cap) {
  RationalBasis basis;
  basis.k = k;
  basis.atoms = atoms_of(e);
  // Probe points: a few tuples of sizes 3..6 in the domain of every atom.
  std::vector<std::vector<Mat>> probe_atoms;
  std::vector<Index> probe_sizes;
  for (Index n = 3; n <= 6; ++n) {
    int got = 0;
    for (int attempt = 0; got < 3 && attempt < 40; ++attempt) {
      const MatrixPoint x = random_selfadjoint_point(e.nvars, n, e.field, mix_seed(seed, 7000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(attempt)));
      std::vector<Mat> vals;
      bool ok = true;
      for (const auto& a : basis.atoms) {
        EvalResult v = eval_strict(a, x);
        if (!v.defined()) {
          ok = false;
          break;
        }
        vals.push_back(*v.value);
      }
      if (!ok) continue;
      probe_atoms.push_back(std::move(vals));
      probe_sizes.push_back(n);
      ++got;
    }
  }
  if (probe_atoms.empty()) throw InputError("basis_of_Vk: no common domain point found for the atoms");

  // values[i][p] = value of element i at probe point p
  std::vector<std::vector<Mat>> values;
  IndependenceFilter filter(1e-8);
  auto add = [&](const Expr& ex, int level, int atom, int parent, std::vector<Mat> vals) {
    if (!filter.try_add(stack(vals))) return false;
    basis.elements.push_back(ex);
    basis.levels.push_back(level);
    basis.atom.push_back(atom);
    basis.parent.push_back(parent);
    values.push_back(std::move(vals));
    return true;
  };
  {
    std::vector<Mat> ones;
    for (Index n : probe_sizes) ones.push_back(Mat::Identity(n, n));
    add(constant(1.0), 0, -1, -1, std::move(ones));
  }
  std::size_t level_begin = 0;
  for (int level = 1; level <= k; ++level) {
    const std::size_t level_end = basis.elements.size();
    const std::size_t before = basis.elements.size();
    bool overflow = false;
    for (std::size_t a = 0; a < basis.atoms.size() && !overflow; ++a)
      for (std::size_t w = level_begin; w < level_end; ++w) {
        std::vector<Mat> vals(probe_sizes.size());
        for (std::size_t p = 0; p < probe_sizes.size(); ++p) vals[p] = probe_atoms[p][a] * values[w][p];
        add(simplified_product(basis.atoms[a], basis.elements[w]), level, static_cast<int>(a), static_cast<int>(w), std::move(vals));
        if (basis.elements.size() > cap) {
          overflow = true;
          break;
        }
      }
    if (overflow) {
      const std::size_t extra = basis.elements.size() - before;
      filter.pop(extra);
      basis.elements.resize(before);
      basis.levels.resize(before);
      basis.atom.resize(before);
      basis.parent.resize(before);
      values.resize(before);
      basis.truncated = true;
      break;
    }
    if (basis.elements.size() == before) break;  // no new independent words: V_k has stabilized
    basis.max_level = level;
    level_begin = level_end;
  }
  basis.min_relative_sigma = filter.min_relative();
  return basis;
}

EquivalencePlan equivalence_plan(const RationalExpr& e, std::uint64_t seed, std::size_t cap, Index max_size,
                                 int samples_per_size) {
  EquivalencePlan plan;
  const NodeCounts c = count_nodes(e.root);
  plan.kappa = c.constants + 2 * c.symbols + c.inverses;
  plan.t = tau(e.root);
  const RationalBasis b = basis_of_Vk(e, 2 * plan.t + 1, seed, cap);
  plan.dim_v = static_cast<Index>(b.size());
  plan.dim_truncated = b.truncated;
  const double dim = static_cast<double>(plan.dim_v);
  plan.size_bound = static_cast<double>(plan.kappa) * (1.0 + (2.0 * plan.t + 1.0) * dim * dim);
  plan.sizes = detail::size_range(max_size);
  plan.samples_per_size = samples_per_size;
  return plan;
}

ResidualStats sohs_residual(const RationalExpr& r, const std::vector<Expr>& squares, Index max_size, int per_size,
                            std::uint64_t seed) {
  ResidualStats st;
  st.sizes = detail::size_range(max_size);
  struct Job {
    MatrixPoint x;
    double res = -1.0;
  };
  std::vector<Job> jobs;
  for (Index n : st.sizes)
    for (int t = 0; t < per_size; ++t)
      jobs.push_back({random_selfadjoint_point(r.nvars, n, r.field, mix_seed(seed, 9000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t))), -1.0});
  kernels::for_each_index_parallel(jobs.size(), [&](std::size_t i) {
    Job& j = jobs[i];
    EvalResult rv = eval_strict(r.root, j.x);
    if (!rv.defined()) return;
    Mat acc = Mat::Zero(j.x.n, j.x.n);
    for (const auto& s : squares) {
      EvalResult sv = eval_strict(s, j.x);
      if (!sv.defined()) return;
      acc += sv.value->adjoint() * *sv.value;
    }
    j.res = (*rv.value - acc).norm() / (1.0 + rv.value->norm());
  });
  double sum = 0.0;
  for (const auto& j : jobs) {
    if (j.res < 0.0) continue;
    st.max = std::max(st.max, j.res);
    sum += j.res;
    ++st.points;
  }
  st.mean = st.points ? sum / st.points : 0.0;
  return st;
}

namespace {

void require_selfadjoint(const RationalExpr& e, std::uint64_t seed) {
  for (Index n = 1; n <= 4; ++n) {
    const MatrixPoint x = random_selfadjoint_point(e.nvars, n, e.field, mix_seed(seed, 123, static_cast<std::uint64_t>(n)));
    EvalResult v = eval_strict(e.root, x);
    if (!v.defined()) continue;
    if ((*v.value - v.value->adjoint()).norm() > 1e-8 * (1.0 + v.value->norm()))
      throw InputError("expression is not self-adjoint");
  }
}

// Basis positions whose diagonal Gram entry vanishes on the whole affine family.
// A PSD G then has the full row zero there, so the element can be dropped.
std::vector<Index> forced_zero_diagonal(const GramSystem& gs) {
  std::vector<Index> out;
  const double ptol = 1e-7 * std::max(1.0, gs.point.norm());
  for (Index a = 0; a < gs.m; ++a)
    if (std::abs(gs.point(a)) <= ptol && (gs.directions.cols() == 0 || gs.directions.row(a).norm() <= 1e-7))
      out.push_back(a);
  return out;
}

std::optional<SohsCertificate> attempt(const RationalExpr& e, int k, std::size_t cap, const SohsOptions& opts) {
  SohsCertificate cert;
  cert.field = e.field;
  cert.nvars = e.nvars;
  cert.k = k;
  cert.basis = basis_of_Vk(e, k, opts.seed, cap);
  const Index m = static_cast<Index>(cert.basis.size());
  auto pts = detail::sample_basis(e, cert.basis, detail::size_range(opts.max_size), opts.samples_per_size,
                                  mix_seed(opts.seed, 1));
  if (pts.empty()) return std::nullopt;
  // Prune basis elements forced out of every Gram matrix, until none are left.
  std::vector<Index> live(static_cast<std::size_t>(m));
  for (Index a = 0; a < m; ++a) live[static_cast<std::size_t>(a)] = a;
  GramSystem gs;
  for (;;) {
    std::vector<SampledPoint> sub = pts;
    for (auto& p : sub) {
      std::vector<Mat> w;
      for (Index a : live) w.push_back(p.w[static_cast<std::size_t>(a)]);
      p.w = std::move(w);
    }
    gs = detail::gram_system(sub, static_cast<Index>(live.size()), e.field);
    if (!gs.consistent) return std::nullopt;
    const auto zero = forced_zero_diagonal(gs);
    if (zero.empty() || zero.size() == live.size()) break;
    std::vector<Index> next;
    for (Index i = 0; i < static_cast<Index>(live.size()); ++i)
      if (std::find(zero.begin(), zero.end(), i) == zero.end()) next.push_back(live[static_cast<std::size_t>(i)]);
    live = std::move(next);
  }
  auto full_gram = [&](const RVec& y) {
    const Mat g = gs.gram(y);
    Mat out = Mat::Zero(m, m);
    for (Index i = 0; i < gs.m; ++i)
      for (Index j = 0; j < gs.m; ++j) out(live[static_cast<std::size_t>(i)], live[static_cast<std::size_t>(j)]) = g(i, j);
    return out;
  };
  SdpOptions so;
  so.tol = opts.sdp_tol;
  LmiSolution sol = solve_max_min_eig(gs.lmi, so);
  if (sol.status == SdpStatus::NumericalFailure) return std::nullopt;
  const double gscale = std::max(1.0, gs.gram(sol.y).norm());
  if (sol.t_star < -opts.tol * gscale) return std::nullopt;
  cert.plan = equivalence_plan(e, opts.seed, cap, opts.max_size, opts.samples_per_size);

  // Squares sqrt(lambda_a) q_a* W from the eigenpairs of G, negatives clipped.
  // Squares from the top `keep` eigenpairs of g, coefficients below drop * max
  // removed; nullopt when the sampled residual fails.
  auto squares_of = [&](const linalg::HermitianEig& eig, Index keep, double drop) -> std::optional<SohsCertificate> {
    SohsCertificate c = cert;
    Mat kept = Mat::Zero(m, m);
    for (Index a = m - 1; a >= m - keep; --a) {
      const double lam = eig.eigenvalues(a);
      kept += lam * eig.eigenvectors.col(a) * eig.eigenvectors.col(a).adjoint();
      const Vec h = std::sqrt(lam) * eig.eigenvectors.col(a).conjugate();
      std::vector<Scalar> coeffs(h.data(), h.data() + h.size());
      if (e.field == Field::Real)
        for (auto& x : coeffs) x = Scalar(x.real(), 0.0);
      c.squares.push_back(linear_combination(coeffs, c.basis.elements, drop * h.cwiseAbs().maxCoeff()));
    }
    c.G = e.field == Field::Real ? Mat(kept.real().cast<Scalar>()) : kept;
    c.residual = sohs_residual(e, c.squares, opts.max_size, opts.samples_per_size, mix_seed(opts.seed, 2));
    if (c.residual.points == 0 || c.residual.max > opts.residual_tol) return std::nullopt;
    return c;
  };
  auto certify = [&](const Mat& g) -> std::optional<SohsCertificate> {
    linalg::HermitianEig eig = linalg::hermitian_eig(linalg::real_part(g));
    const double top = std::max(eig.eigenvalues.maxCoeff(), 0.0);
    Index positive = 0;
    while (positive < m && eig.eigenvalues(m - 1 - positive) > 1e-12 * top) ++positive;
    auto full = squares_of(eig, positive, 1e-12);
    if (!full) return std::nullopt;
    // Trailing eigenvalues past a wide spectral gap and tiny coefficients are
    // usually solver noise; they inflate realizations, so shorter certificates
    // are tried first.
    std::vector<Index> keeps;
    for (Index keep = 1; keep < positive; ++keep)
      if (eig.eigenvalues(m - keep) > 1e3 * eig.eigenvalues(m - keep - 1)) keeps.push_back(keep);
    keeps.push_back(positive);
    for (Index keep : keeps)
      for (double drop : {1e-6, 1e-9})
        if (auto c = squares_of(eig, keep, drop)) return c;
    return full;
  };
  // On the boundary a maximal-rank point carries spurious squares; a point on the
  // reduced face is tried first and kept only if it still passes the residual check.
  if (sol.t_star <= so.tol) {
    LmiSolution face = max_rank_feasible(gs.lmi, so);
    if (face.status != SdpStatus::NumericalFailure && face.t_star >= -so.tol * gscale) {
      if (auto c = certify(full_gram(face.y))) return c;
    }
  }
  return certify(full_gram(sol.y));
}

}  // namespace

std::optional<SohsCertificate> sohs_decompose(const RationalExpr& e, const SohsOptions& opts) {
  require_selfadjoint(e, opts.seed);
  const int k = opts.k.value_or(2 * tau(e.root) + 1);
  if (auto c = attempt(e, k, opts.cap, opts)) return c;
  if (!opts.escalate) return std::nullopt;
  return attempt(e, k + 2, 2 * opts.cap, opts);
}

Realization positively_elliptic_realization(const SohsCertificate& cert, std::uint64_t seed) {
  if (cert.squares.empty()) throw InputError("certificate has no squares");
  auto center = find_common_center(cert.squares, cert.nvars, cert.field, 64, seed);
  if (!center) throw InputError("squares have no common scalar center");
  std::vector<Realization> parts;
  Index total = 0;
  for (const auto& s : cert.squares) {
    parts.push_back(minimize(build(RationalExpr{s, cert.field, cert.nvars}, *center)));
    // c* L^-1 b is unchanged by c -> c / a, b -> a b; unit c keeps Re A_0 well scaled.
    Realization& q = parts.back();
    const double a = q.c.norm();
    if (a > 0.0) {
      q.c /= a;
      q.b *= a;
    }
    total += 2 * parts.back().size();
  }
  Realization out;
  out.field = cert.field;
  out.center = *center;
  out.pencil = LinearPencil::zeros(cert.nvars, total, total, cert.field);
  out.b = Vec::Zero(total);
  Index off = 0;
  for (const auto& p : parts) {
    const Index d = p.size();
    out.pencil[0].block(off, off, d, d) = p.c * p.c.adjoint();
    for (int j = 0; j <= cert.nvars; ++j) {
      out.pencil[j].block(off, off + d, d, d) = p.pencil[j].adjoint();
      out.pencil[j].block(off + d, off, d, d) = -p.pencil[j];
    }
    out.b.segment(off + d, d) = p.b;
    off += 2 * d;
  }
  out.c = out.b;
  return out;
}

std::string to_string(StrictPositivity::Outcome o) {
  switch (o) {
    case StrictPositivity::Outcome::Positive: return "strictly_positive";
    case StrictPositivity::Outcome::NotPositive: return "not_strictly_positive";
    case StrictPositivity::Outcome::NotRegular: return "not_regular";
    case StrictPositivity::Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

StrictPositivity strictly_positive(const RationalExpr& e, double tol, std::uint64_t seed) {
  StrictPositivity out;
  ClassifyOptions co;
  co.tol = tol;
  auto center = find_scalar_center(e, 64, seed);
  if (!center) {
    out.outcome = StrictPositivity::Outcome::NotRegular;
    out.reason = "no scalar center";
    return out;
  }
  const Realization r = minimize(build(e, *center));
  const EllipticityCertificate rc = classify(r.pencil, co);
  out.regular_verdict = rc.verdict;
  if (rc.verdict == Verdict::Inconclusive) {
    out.reason = "regularity of r is inconclusive: " + rc.message;
    return out;
  }
  if (rc.verdict == Verdict::NotElliptic) {
    out.outcome = StrictPositivity::Outcome::NotRegular;
    out.reason = "r is not regular";
    return out;
  }
  auto v0 = eval_realization(r, MatrixPoint::zeros(e.nvars, 1, e.field));
  if (!v0) {
    out.reason = "minimal realization singular at 0";
    return out;
  }
  out.value_at_zero = (*v0)(0, 0).real();
  if (out.value_at_zero <= tol) {
    out.outcome = StrictPositivity::Outcome::NotPositive;
    out.reason = "r(0) is not positive";
    return out;
  }
  const RationalExpr inv{inverse(e.root), e.field, e.nvars};
  auto ci = find_scalar_center(inv, 64, seed);
  if (!ci) {
    out.reason = "inverse has no scalar center";
    return out;
  }
  const Realization ri = minimize(build(inv, *ci));
  const EllipticityCertificate ic = classify(ri.pencil, co);
  out.inverse_verdict = ic.verdict;
  if (ic.verdict == Verdict::Inconclusive) {
    out.reason = "regularity of 1/r is inconclusive: " + ic.message;
    return out;
  }
  if (ic.verdict == Verdict::NotElliptic) {
    out.outcome = StrictPositivity::Outcome::NotPositive;
    out.reason = "1/r is not regular";
    return out;
  }
  out.outcome = StrictPositivity::Outcome::Positive;
  out.reason = "r(0) > 0 and 1/r is regular";
  return out;
}

}  // namespace ncr
