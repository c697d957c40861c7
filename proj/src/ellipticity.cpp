#include "ncr/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ncr {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::StablyElliptic: return "stably_elliptic";
    case Verdict::Elliptic: return "elliptic";
    case Verdict::NotElliptic: return "not_elliptic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Real coordinates of D in K^{e x d}: row-major real parts, then imaginary parts for C.
Index dvars(Index e, Index d, Field f) { return (f == Field::Real ? 1 : 2) * e * d; }

Mat d_from_coords(const RVec& x, Index e, Index d, Field f) {
  Mat out(e, d);
  for (Index a = 0; a < e; ++a)
    for (Index b = 0; b < d; ++b) {
      const double im = f == Field::Complex ? x(e * d + a * d + b) : 0.0;
      out(a, b) = Scalar(x(a * d + b), im);
    }
  return out;
}

struct StepResult {
  enum Kind { Stable, Recurse, Fail, Failure } kind = Failure;
  ChainStep step;
  std::vector<Mat> exposing;
  std::string message;
};

// Coordinates (columns) of the D with Re(D A_j) = 0 for j >= 1.
RMat admissible_coords(const LinearPencil& l) {
  const Index nv = dvars(l.e, l.d, l.field);
  const Index hc = hermitian_coords_size(l.e, l.field);
  RMat eq(hc * l.g, nv);
  for (Index v = 0; v < nv; ++v) {
    RVec unit = RVec::Zero(nv);
    unit(v) = 1.0;
    const Mat dm = d_from_coords(unit, l.e, l.d, l.field);
    for (int j = 1; j <= l.g; ++j)
      eq.block((j - 1) * hc, v, hc, 1) = hermitian_coords(linalg::real_part(dm * l[j]), l.field);
  }
  const double scale = std::max(1.0, eq.size() ? eq.cwiseAbs().maxCoeff() : 0.0);
  return eq.rows() ? linalg::null_space(eq / scale, 1e-10) : RMat(RMat::Identity(nv, nv));
}

// Dominant eigenspace (eigenvalue > 1e-2 max) of a Hermitian matrix.
Mat dominant_range(const Mat& z) {
  linalg::HermitianEig ze = linalg::hermitian_eig(z);
  const double zmax = ze.eigenvalues.size() ? ze.eigenvalues.maxCoeff() : 0.0;
  std::vector<Index> keep;
  for (Index i = 0; i < ze.eigenvalues.size(); ++i)
    if (zmax > 0.0 && ze.eigenvalues(i) > 1e-2 * zmax) keep.push_back(i);
  Mat out(z.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Index>(c)) = ze.eigenvectors.col(keep[c]);
  return out;
}

// Real coordinates of a complex matrix: real parts then imaginary parts (column-major).
RVec flatten(const Mat& m, Field f) {
  const Index n = m.size();
  RVec out((f == Field::Real ? 1 : 2) * n);
  for (Index i = 0; i < n; ++i) {
    out(i) = m.data()[i].real();
    if (f == Field::Complex) out(n + i) = m.data()[i].imag();
  }
  return out;
}

// max lambda_min over the normalized slice {sum_c w_c H_c : tr = 1} of a span of
// Hermitian matrices. Returns nullopt when every element is traceless.
struct SliceResult {
  LmiSolution sol;
  AffineSubspace sub;
};

std::optional<SliceResult> max_min_eig_slice(const std::vector<Mat>& span_in, Index r, Field f, double scale,
                                              const SdpOptions& opts) {
  // Work on an independent spanning set: directions that vanish identically
  // leave the barrier Hessian singular.
  const Index k0 = static_cast<Index>(span_in.size());
  RMat coords(hermitian_coords_size(r, f), k0);
  for (Index c = 0; c < k0; ++c) coords.col(c) = hermitian_coords(span_in[static_cast<std::size_t>(c)], f);
  Eigen::JacobiSVD<RMat> svd(coords, Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-8 * std::max(scale, sv(0))) ++rank;
  const RMat t = svd.matrixV().leftCols(rank);
  std::vector<Mat> span;
  for (Index c = 0; c < rank; ++c) {
    Mat h = Mat::Zero(r, r);
    for (Index i = 0; i < k0; ++i) h += t(i, c) * span_in[static_cast<std::size_t>(i)];
    span.push_back(std::move(h));
  }
  const Index k = rank;
  RVec tr(k);
  for (Index c = 0; c < k; ++c) tr(c) = span[static_cast<std::size_t>(c)].trace().real();
  SliceResult out;
  out.sub = eliminate_equalities(k, RMat(0, k), tr, 1.0);
  if (k == 0 || !out.sub.feasible) return std::nullopt;
  auto combo = [&](const RVec& w) {
    Mat h = Mat::Zero(r, r);
    for (Index c = 0; c < k; ++c) h += w(c) * span[static_cast<std::size_t>(c)];
    return h;
  };
  LmiProblem p;
  p.base = embed_hermitian(combo(out.sub.point), f);
  for (Index c = 0; c < out.sub.directions.cols(); ++c) p.directions.push_back(embed_hermitian(combo(out.sub.directions.col(c)), f));
  out.sol = solve_max_min_eig(p, opts);
  out.sol.y = t * (out.sub.point + out.sub.directions * out.sol.y);
  return out;
}

// Facial reduction on the cone {Re(D A_0) : Re(D A_j) = 0, j >= 1} intersected with
// the PSD cone. Each round either finds a positive definite element on the current
// face, shows the face meets the PSD cone only at 0 (a positive definite exposing
// matrix exists, or the normalized slice is strictly infeasible), or pins the
// dominant eigenspace of an exposing matrix into the kernel.
StepResult one_step(const LinearPencil& l, const ClassifyOptions& opts) {
  StepResult r;
  const Index d = l.d, e = l.e;
  const Field f = l.field;
  RMat nbasis = admissible_coords(l);
  r.step.homogeneous_dim = nbasis.cols();
  auto fail = [&](std::string why) {
    r.kind = StepResult::Fail;
    r.message = std::move(why);
    return r;
  };
  auto re0 = [&](const RVec& x) { return linalg::real_part(d_from_coords(x, e, d, f) * l[0]); };

  const double a0scale = std::max(1e-300, linalg::spectral_norm(l[0]));
  Mat exposed(e, 0);
  Mat face = Mat::Identity(e, e);
  for (Index round = 0; round <= e; ++round) {
    if (nbasis.cols() == 0) return fail("only D = 0 satisfies the constraints");
    if (face.cols() == 0) return fail("Re(D A_0) >= 0 forces Re(D A_0) = 0");
    const Index rf = face.cols();
    std::vector<Mat> span;
    for (Index c = 0; c < nbasis.cols(); ++c) span.push_back(linalg::real_part(face.adjoint() * re0(nbasis.col(c)) * face));
    auto primal = max_min_eig_slice(span, rf, f, a0scale, opts.sdp);
    if (!primal) {
      r.exposing.push_back(face * face.adjoint());
      return fail("Re(D A_0) has zero trace on every admissible D");
    }
    if (primal->sol.status == SdpStatus::NumericalFailure) {
      r.kind = StepResult::Failure;
      r.message = "SDP: " + primal->sol.message;
      return r;
    }
    const double tp = primal->sol.t_star;
    if (round == 0) r.step.t_star = tp;
    // A positive slice value only counts when it survives the verifier's scaling by |D|.
    const RVec x = nbasis * primal->sol.y;
    const Mat dcand = d_from_coords(x, e, d, f);
    if (tp > opts.tol * std::max(1.0, linalg::spectral_norm(dcand))) {
      r.step.D = dcand;
      const Mat re = re0(x);
      r.step.eigs = linalg::hermitian_eig(re).eigenvalues;
      if (exposed.cols() == 0) {
        r.kind = StepResult::Stable;
        r.step.V = Mat(e, 0);
      } else {
        r.kind = StepResult::Recurse;
        r.step.V = exposed;
      }
      return r;
    }

    // Exposing matrices: Hermitian Z on the face orthogonal to every element of the span.
    const Index hr = hermitian_coords_size(rf, f);
    RMat img(static_cast<Index>(span.size()), hr);
    for (std::size_t c = 0; c < span.size(); ++c) img.row(static_cast<Index>(c)) = hermitian_coords(span[c], f).transpose();
    const double iscale = std::max(1e-300, img.cwiseAbs().maxCoeff());
    const RMat perp = linalg::null_space(img / iscale, 1e-8);
    std::vector<Mat> zspan;
    for (Index c = 0; c < perp.cols(); ++c) zspan.push_back(hermitian_from_coords(perp.col(c), rf, f));
    auto dual = zspan.empty() ? std::nullopt : max_min_eig_slice(zspan, rf, f, 1.0, opts.sdp);
    const bool dual_ok = dual && dual->sol.status != SdpStatus::NumericalFailure;
    Mat z = Mat::Zero(rf, rf);
    if (dual_ok)
      for (Index c = 0; c < static_cast<Index>(zspan.size()); ++c) z += dual->sol.y(c) * zspan[static_cast<std::size_t>(c)];
    if (tp < -opts.tol) {
      // The slice dual Z has <Z, P> = t* on the slice, so Z - t* I is orthogonal to the span.
      Mat zp = unembed_hermitian(primal->sol.dual, rf, f);
      const Mat pp = linalg::real_part(face.adjoint() * re0(x) * face);
      zp -= ((zp * pp).trace().real() / pp.trace().real()) * Mat::Identity(rf, rf);
      if (linalg::hermitian_eig(zp).eigenvalues(0) > 0.0)
        r.exposing.push_back(face * zp * face.adjoint());
      else if (dual_ok && dual->sol.t_star > 0.0)
        r.exposing.push_back(face * z * face.adjoint());
      return fail("no D with Re(D A_0) >= 0 nonzero");
    }
    if (!dual_ok) {
      r.kind = StepResult::Failure;
      r.message = "boundary case without an exposing matrix";
      return r;
    }
    const double tz = dual->sol.t_star;
    r.exposing.push_back(face * z * face.adjoint());
    if (tz > opts.tol) return fail("a positive definite matrix is orthogonal to every admissible Re(D A_0)");
    if (tz < -opts.tol) {
      r.kind = StepResult::Failure;
      r.message = "neither a positive definite element nor an exposing matrix was found";
      return r;
    }
    const Mat ex = face * dominant_range(z);

    // Pin Re(D A_0) ex = 0 on the admissible D.
    RMat pin(flatten(Mat::Zero(e, ex.cols()), f).size(), nbasis.cols());
    double pscale = 1e-300;
    for (Index c = 0; c < nbasis.cols(); ++c) {
      const Mat rc = re0(nbasis.col(c));
      pscale = std::max(pscale, rc.cwiseAbs().maxCoeff());
      pin.col(c) = flatten(rc * ex, f);
    }
    // Scale by the span, not by the residual: roundoff-sized rows must stay small.
    pin /= pscale;
    nbasis = nbasis * linalg::null_space(pin, 1e-9);
    Mat grown(e, exposed.cols() + ex.cols());
    grown << exposed, ex;
    exposed = linalg::orthonormal_columns(grown, 1e-8);
    face = exposed.cols() < e ? linalg::kernel_basis(Mat(exposed * exposed.adjoint()), 0.5) : Mat(e, 0);
  }
  r.kind = StepResult::Failure;
  r.message = "facial reduction did not terminate";
  return r;
}

// Connected components of the row/column incidence graph of the coefficients:
// L is, up to permutations, the direct sum of the sub-pencils on these blocks.
struct Summand {
  std::vector<Index> rows, cols;
};

std::vector<Summand> direct_summands(const LinearPencil& l) {
  std::vector<Index> parent(static_cast<std::size_t>(l.d + l.e));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<Index>(i);
  auto root = [&](Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  };
  for (const Mat& a : l.coeffs)
    for (Index r = 0; r < l.d; ++r)
      for (Index c = 0; c < l.e; ++c)
        if (a(r, c) != Scalar(0.0)) parent[static_cast<std::size_t>(root(r))] = root(l.d + c);
  std::vector<Summand> out;
  std::vector<Index> slot(parent.size(), -1);
  auto block_of = [&](Index node) -> Summand& {
    const std::size_t rt = static_cast<std::size_t>(root(node));
    if (slot[rt] < 0) {
      slot[rt] = static_cast<Index>(out.size());
      out.emplace_back();
    }
    return out[static_cast<std::size_t>(slot[rt])];
  };
  for (Index c = 0; c < l.e; ++c) block_of(l.d + c).cols.push_back(c);
  for (Index r = 0; r < l.d; ++r) {
    const std::size_t rt = static_cast<std::size_t>(root(r));
    if (slot[rt] >= 0) out[static_cast<std::size_t>(slot[rt])].rows.push_back(r);  // zero rows belong to no block
  }
  return out;
}

LinearPencil sub_pencil(const LinearPencil& l, const Summand& b) {
  LinearPencil s = LinearPencil::zeros(l.g, static_cast<Index>(b.rows.size()), static_cast<Index>(b.cols.size()), l.field);
  for (int j = 0; j <= l.g; ++j)
    for (std::size_t r = 0; r < b.rows.size(); ++r)
      for (std::size_t c = 0; c < b.cols.size(); ++c)
        s[j](static_cast<Index>(r), static_cast<Index>(c)) = l[j](b.rows[r], b.cols[c]);
  return s;
}

// Classifies each summand and stitches the chains into one for the whole pencil.
// nullopt when the summands do not lead to a certificate of the whole.
std::optional<EllipticityCertificate> classify_summands(const LinearPencil& l, const std::vector<Summand>& blocks,
                                                        const ClassifyOptions& opts) {
  EllipticityCertificate out;
  for (const Summand& b : blocks) {
    if (b.rows.size() < b.cols.size()) {
      // fewer rows than columns: rank deficient at every point
      out.verdict = Verdict::NotElliptic;
      out.witness = MatrixPoint::zeros(l.g, 1, l.field);
      out.message = "a direct summand has more columns than rows";
      return out;
    }
  }
  std::vector<EllipticityCertificate> certs;
  for (const Summand& b : blocks) {
    certs.push_back(classify(sub_pencil(l, b), opts));
    const EllipticityCertificate& c = certs.back();
    if (c.verdict == Verdict::Inconclusive) {
      out.verdict = Verdict::Inconclusive;
      out.message = "direct summand: " + c.message;
      return out;
    }
    if (c.verdict == Verdict::NotElliptic) {
      if (!c.witness) return std::nullopt;
      out.verdict = Verdict::NotElliptic;
      out.witness = c.witness;
      out.message = "direct summand: " + c.message;
      return out;
    }
  }

  std::size_t steps = 0;
  for (const auto& c : certs) steps = std::max(steps, c.chain.size());
  const std::size_t nb = blocks.size();
  // Positions of each block's current columns among the current columns of L.
  std::vector<std::vector<Index>> pos(nb);
  for (std::size_t i = 0; i < nb; ++i) pos[i] = blocks[i].cols;
  Index width = l.e;
  LinearPencil cur = l;
  for (std::size_t k = 0; k < steps; ++k) {
    ChainStep st;
    st.D = Mat::Zero(width, l.d);
    st.t_star = std::numeric_limits<double>::infinity();
    std::vector<std::vector<Index>> next(nb);
    Index next_width = 0;
    for (std::size_t i = 0; i < nb; ++i) {
      if (k >= certs[i].chain.size()) continue;
      const ChainStep& bs = certs[i].chain[k];
      for (Index a = 0; a < bs.D.rows(); ++a)
        for (Index b = 0; b < bs.D.cols(); ++b) st.D(pos[i][static_cast<std::size_t>(a)], blocks[i].rows[static_cast<std::size_t>(b)]) = bs.D(a, b);
      st.t_star = std::min(st.t_star, bs.t_star);
      st.homogeneous_dim += bs.homogeneous_dim;
      for (Index c = 0; c < bs.V.cols(); ++c) next[i].push_back(next_width++);
    }
    st.V = Mat::Zero(width, next_width);
    for (std::size_t i = 0; i < nb; ++i) {
      if (k >= certs[i].chain.size()) continue;
      const Mat& v = certs[i].chain[k].V;
      for (Index a = 0; a < v.rows(); ++a)
        for (Index c = 0; c < v.cols(); ++c) st.V(pos[i][static_cast<std::size_t>(a)], next[i][static_cast<std::size_t>(c)]) = v(a, c);
    }
    st.eigs = linalg::hermitian_eig(real_compress(st.D, cur)[0]).eigenvalues;
    out.chain.push_back(st);
    if (next_width > 0) cur = restrict_columns(cur, st.V);
    pos = std::move(next);
    width = next_width;
  }
  if (steps == 1) {
    out.verdict = Verdict::StablyElliptic;
    out.epsilon = epsilon_bound(out.chain[0].D, l, 1e-6);
  } else {
    out.verdict = Verdict::Elliptic;
  }
  out.message = std::to_string(nb) + " direct summands";
  return out;
}

}  // namespace

EllipticityCertificate classify(const LinearPencil& input, const ClassifyOptions& opts) {
  input.validate();
  EllipticityCertificate cert;
  LinearPencil cur = input;
  if (input.d < input.e) {
    cert.transposed = true;
    cur = adjoint(input);
  }
  if (cur.e == 0) {
    cert.verdict = Verdict::StablyElliptic;
    cert.message = "pencil has no columns";
    return cert;
  }
  if (const auto blocks = direct_summands(cur); blocks.size() > 1) {
    if (auto c = classify_summands(cur, blocks, opts)) {
      c->transposed = cert.transposed;
      return *c;
    }
  }
  while (true) {
    StepResult s = one_step(cur, opts);
    if (s.kind == StepResult::Failure) {
      cert.verdict = Verdict::Inconclusive;
      cert.message = s.message;
      return cert;
    }
    if (s.kind == StepResult::Fail) {
      cert.verdict = Verdict::NotElliptic;
      cert.message = s.message;
      cert.exposing = std::move(s.exposing);
      if (!opts.want_witness) return cert;
      // A witness for the restricted pencil L V_1 ... V_k is one for L.
      auto w = singular_witness(cur, opts.tol, opts.witness_delta, opts.sdp);
      if (!w && !cert.chain.empty()) w = singular_witness(cert.transposed ? adjoint(input) : input, opts.tol, opts.witness_delta, opts.sdp);
      if (w)
        cert.witness = *w;
      else
        cert.message += "; no singular point was extracted";
      return cert;
    }
    cert.chain.push_back(s.step);
    if (s.kind == StepResult::Stable) {
      if (cert.chain.size() == 1) {
        cert.verdict = Verdict::StablyElliptic;
        cert.epsilon = epsilon_bound(s.step.D, cur, 1e-6);
      } else {
        cert.verdict = Verdict::Elliptic;
      }
      return cert;
    }
    cur = restrict_columns(cur, s.step.V);
  }
}

double epsilon_bound(const Mat& dmat, const LinearPencil& l, double tol) {
  auto re = real_compress(dmat, l);
  const double dn = std::max(1.0, linalg::spectral_norm(dmat));
  for (int j = 1; j <= l.g; ++j)
    if (re[static_cast<std::size_t>(j)].norm() > tol * dn) throw InputError("epsilon_bound: Re(D A_j) != 0");
  linalg::HermitianEig eig = linalg::hermitian_eig(re[0]);
  const double lmin = eig.eigenvalues(0);
  if (!(lmin > 0.0)) throw InputError("epsilon_bound: Re(D A_0) is not positive definite");
  // ||R^{-1}||^2 = 1 / lambda_min.
  const double dnorm = linalg::spectral_norm(dmat);
  return lmin * lmin / (dnorm * dnorm);
}

namespace {

// Re-derives the admissible span of Re(D A_0) and checks that the exposing
// matrices successively pin it down to zero.
CheckResult check_exposing(const LinearPencil& l, const std::vector<Mat>& zs, double tol) {
  auto fail = [](std::string why) { return CheckResult{false, std::move(why)}; };
  const Index e = l.e;
  RMat nbasis = admissible_coords(l);
  auto re0 = [&](const RVec& x) { return linalg::real_part(d_from_coords(x, e, l.d, l.field) * l[0]); };
  Mat exposed(e, 0);
  for (std::size_t i = 0; i <= zs.size(); ++i) {
    // Remaining admissible span: zero means Re(D A_0) = 0 is forced.
    double top = 0.0;
    for (Index c = 0; c < nbasis.cols(); ++c) top = std::max(top, re0(nbasis.col(c)).norm());
    if (nbasis.cols() == 0 || top <= tol) return {true, ""};
    if (exposed.cols() == e) return fail("exposed kernel is everything but the span is nonzero");
    if (i == zs.size()) break;
    const Mat& z = zs[i];
    if (z.rows() != e || z.cols() != e) return fail("exposing matrix has wrong size");
    if ((z - z.adjoint()).norm() > 1e-9 * (1.0 + z.norm())) return fail("exposing matrix is not self-adjoint");
    const double zn = std::max(1e-300, linalg::spectral_norm(z));
    if (linalg::hermitian_eig(z).eigenvalues(0) < -std::sqrt(tol) * zn) return fail("exposing matrix is not PSD");
    for (Index c = 0; c < nbasis.cols(); ++c) {
      const Mat p = re0(nbasis.col(c));
      if (std::abs((z * p).trace().real()) > std::sqrt(tol) * zn * std::max(1.0, p.norm()))
        return fail("exposing matrix " + std::to_string(i) + " is not orthogonal to the admissible span");
    }
    const Mat ex = dominant_range(z);
    if (ex.cols() == 0) return fail("exposing matrix is zero");
    RMat pin(flatten(Mat::Zero(e, ex.cols()), l.field).size(), nbasis.cols());
    for (Index c = 0; c < nbasis.cols(); ++c) pin.col(c) = flatten(re0(nbasis.col(c)) * ex, l.field);
    nbasis = nbasis * linalg::null_space(pin, 1e-9);
    Mat grown(e, exposed.cols() + ex.cols());
    grown << exposed, ex;
    exposed = linalg::orthonormal_columns(grown, 1e-8);
  }
  return fail("exposing matrices leave a nonzero admissible Re(D A_0)");
}

}  // namespace

CheckResult verify_certificate(const LinearPencil& input, const EllipticityCertificate& cert, double tol) {
  auto fail = [](std::string why) { return CheckResult{false, std::move(why)}; };
  if (cert.verdict == Verdict::Inconclusive) return fail("inconclusive verdict carries no certificate");
  LinearPencil cur = cert.transposed ? adjoint(input) : input;
  if (cert.transposed != (input.d < input.e)) return fail("transposition flag inconsistent with pencil shape");

  for (std::size_t k = 0; k < cert.chain.size(); ++k) {
    const ChainStep& st = cert.chain[k];
    if (st.D.rows() != cur.e || st.D.cols() != cur.d) return fail("step " + std::to_string(k) + ": D has wrong size");
    auto re = real_compress(st.D, cur);
    const double dn = std::max(1.0, linalg::spectral_norm(st.D));
    for (int j = 1; j <= cur.g; ++j)
      if (re[static_cast<std::size_t>(j)].norm() > tol * dn)
        return fail("step " + std::to_string(k) + ": Re(D A_" + std::to_string(j) + ") != 0");
    RVec ev = linalg::hermitian_eig(re[0]).eigenvalues;
    if (ev.size() == 0) return fail("empty step");
    const bool last = k + 1 == cert.chain.size();
    if (ev(0) < -tol * dn) return fail("step " + std::to_string(k) + ": Re(D A_0) not PSD");
    if (ev(ev.size() - 1) <= tol * dn) return fail("step " + std::to_string(k) + ": Re(D A_0) = 0");
    if (last && cert.verdict != Verdict::NotElliptic) {
      if (ev(0) <= tol * dn) return fail("final step: Re(D A_0) not positive definite");
      if (st.V.cols() != 0) return fail("final step has a kernel");
      break;
    }
    // Asserted kernel: orthonormal, annihilated, and of the right dimension.
    const Mat& v = st.V;
    if (v.rows() != cur.e || v.cols() == 0 || v.cols() >= cur.e) return fail("step " + std::to_string(k) + ": bad kernel size");
    if ((v.adjoint() * v - Mat::Identity(v.cols(), v.cols())).norm() > 1e-8) return fail("kernel basis not orthonormal");
    if ((re[0] * v).norm() > std::sqrt(tol) * dn) return fail("step " + std::to_string(k) + ": V not in kernel");
    Index small = 0;
    for (Index i = 0; i < ev.size(); ++i)
      if (ev(i) <= tol * dn) ++small;
    if (small != v.cols()) return fail("step " + std::to_string(k) + ": kernel dimension mismatch");
    cur = restrict_columns(cur, v);
  }

  switch (cert.verdict) {
    case Verdict::StablyElliptic:
      if (cert.chain.size() != 1) return fail("stably elliptic needs a single step");
      if (cert.epsilon) {
        const double eps = epsilon_bound(cert.chain[0].D, cert.transposed ? adjoint(input) : input, tol);
        if (*cert.epsilon > eps * (1.0 + 1e-9)) return fail("claimed epsilon exceeds the bound from D");
      }
      return {true, "stably elliptic certificate verified"};
    case Verdict::Elliptic:
      if (cert.chain.size() < 2) return fail("elliptic chain must restrict at least once");
      return {true, "elliptic chain verified"};
    case Verdict::NotElliptic: {
      if (!cert.witness) {
        CheckResult c = check_exposing(cur, cert.exposing, tol);
        if (!c) return c;
        return {true, "exposing matrices verified"};
      }
      const MatrixPoint& x = *cert.witness;
      if (x.g() != input.g) return fail("witness arity mismatch");
      for (const auto& m : x.mats)
        if ((m - m.adjoint()).norm() > 1e-9 * (1.0 + m.norm())) return fail("witness is not self-adjoint");
      const Mat lx = eval(input, x);
      const double smin = linalg::min_singular_value(lx);
      const double scale = std::max(1.0, linalg::spectral_norm(lx));
      if (smin > std::sqrt(tol) * scale) return fail("witness does not make L singular");
      return {true, "singular point verified"};
    }
    case Verdict::Inconclusive: break;
  }
  return fail("unreachable");
}

}  // namespace ncr
