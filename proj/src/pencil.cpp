#include "ncr/pencil.hpp"

#include <algorithm>

#include "ncr/kernels.hpp"

namespace ncr {

LinearPencil LinearPencil::zeros(int g, Index d, Index e, Field field) {
  LinearPencil l;
  l.field = field;
  l.g = g;
  l.d = d;
  l.e = e;
  l.coeffs.assign(static_cast<std::size_t>(g + 1), Mat::Zero(d, e));
  return l;
}

void LinearPencil::validate() const {
  if (g < 0 || d < 0 || e < 0) throw InputError("pencil: negative dimension");
  if (coeffs.size() != static_cast<std::size_t>(g + 1))
    throw InputError("pencil: expected " + std::to_string(g + 1) + " coefficients, got " +
                     std::to_string(coeffs.size()));
  for (const auto& a : coeffs) {
    if (a.rows() != d || a.cols() != e) throw InputError("pencil: coefficient size mismatch");
    if (field == Field::Real && a.size() && a.imag().cwiseAbs().maxCoeff() > 0.0)
      throw InputError("pencil: real pencil has complex entries");
  }
}

Mat eval(const LinearPencil& l, const MatrixPoint& x) {
  if (x.g() != l.g) throw InputError("pencil eval: point has " + std::to_string(x.g()) +
                                     " components, pencil has g = " + std::to_string(l.g));
  const Index n = x.n;
  Mat out = linalg::kron(l[0], Mat::Identity(n, n));
  for (int j = 1; j <= l.g; ++j) {
    const Mat& a = l[j];
    const Mat& xj = x.mats[static_cast<std::size_t>(j - 1)];
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        if (a(r, c) != Scalar(0.0)) out.block(r * n, c * n, n, n) += a(r, c) * xj;
  }
  return out;
}

std::vector<Mat> real_compress(const Mat& dmat, const LinearPencil& l) {
  if (dmat.rows() != l.e || dmat.cols() != l.d) throw InputError("real_compress: D must be e x d");
  std::vector<Mat> out;
  out.reserve(l.coeffs.size());
  for (const auto& a : l.coeffs) out.push_back(linalg::real_part(dmat * a));
  return out;
}

LinearPencil restrict_columns(const LinearPencil& l, const Mat& v) {
  if (v.rows() != l.e) throw InputError("restrict: V must have e rows");
  if (v.cols() > 0) {
    RVec s = linalg::singular_values(v);
    if (s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0))) throw InputError("restrict: V is rank deficient");
  }
  LinearPencil out = l;
  out.e = v.cols();
  for (auto& a : out.coeffs) a = (a * v).eval();
  return out;
}

LinearPencil adjoint(const LinearPencil& l) {
  LinearPencil out = l;
  std::swap(out.d, out.e);
  for (auto& a : out.coeffs) a = a.adjoint().eval();
  return out;
}

LinearPencil left_multiply(const Mat& p, const LinearPencil& l) {
  if (p.cols() != l.d) throw InputError("left_multiply: size mismatch");
  LinearPencil out = l;
  out.d = p.rows();
  for (auto& a : out.coeffs) a = (p * a).eval();
  return out;
}

std::vector<Index> default_sample_sizes(const LinearPencil& l) {
  const Index cap = std::min<Index>(static_cast<Index>(l.g + 1) * l.e * l.e, 12);
  std::vector<Index> sizes;
  for (Index n = 1; n <= std::max<Index>(cap, 1); ++n) sizes.push_back(n);
  return sizes;
}

FullRankSample full_rank_sample(const LinearPencil& l, const std::vector<Index>& sizes, int trials,
                                std::uint64_t seed, bool selfadjoint) {
  std::vector<MatrixPoint> points;
  for (Index n : sizes)
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t));
      points.push_back(selfadjoint ? random_selfadjoint_point(l.g, n, l.field, s)
                                   : random_general_point(l.g, n, l.field, s));
    }
  FullRankSample out;
  out.samples = static_cast<int>(points.size());
  if (points.empty()) return out;
  auto sig = kernels::pencil_sigmas_parallel(l, points);
  std::size_t worst = 0;
  out.min_sigma = sig[0].sigma;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    out.min_sigma = std::min(out.min_sigma, sig[i].sigma);
    if (sig[i].relative < sig[worst].relative) worst = i;
  }
  out.min_relative_sigma = sig[worst].relative;
  out.worst = points[worst];
  return out;
}

bool jointly_nilpotent(const LinearPencil& l) {
  if (l.d != l.e) throw InputError("jointly_nilpotent: pencil must be square");
  const Index d = l.d;
  if (d == 0) return true;
  RVec s = linalg::singular_values(l[0]);
  if (s(d - 1) <= 1e-12 * std::max(1.0, s(0))) throw InputError("jointly_nilpotent: A_0 is singular");
  Eigen::PartialPivLU<Mat> lu(l[0]);
  std::vector<Mat> n;
  double scale = 1.0;
  for (int j = 1; j <= l.g; ++j) {
    n.push_back(lu.solve(l[j]));
    scale = std::max(scale, linalg::spectral_norm(n.back()));
  }
  if (n.empty()) return true;
  // Span of all words of length k applied to K^d, shrunk step by step.
  Mat w = Mat::Identity(d, d);
  for (Index step = 0; step < d && w.cols() > 0; ++step) {
    Mat stacked(d, w.cols() * static_cast<Index>(n.size()));
    for (std::size_t j = 0; j < n.size(); ++j) stacked.middleCols(static_cast<Index>(j) * w.cols(), w.cols()) = n[j] * w;
    w = linalg::orthonormal_columns(stacked, 1e-9, 1e-10 * scale);
  }
  return w.cols() == 0;
}

}  // namespace ncr
