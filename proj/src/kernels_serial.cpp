#include "ncr/kernels.hpp"

namespace ncr::kernels {

namespace {

SigmaPair sigma_at(const LinearPencil& l, const MatrixPoint& x) {
  RVec s = linalg::singular_values(eval(l, x));
  if (s.size() == 0) return {};
  const double smin = s(s.size() - 1);
  return {smin, s(0) > 0.0 ? smin / s(0) : 0.0};
}

}  // namespace

std::vector<SigmaPair> pencil_sigmas_serial(const LinearPencil& l, std::span<const MatrixPoint> points) {
  std::vector<SigmaPair> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = sigma_at(l, points[i]);
  return out;
}

RMat gram_serial(const RMat& p) {
  const Index k = p.cols();
  RMat h(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j <= i; ++j) {
      const double v = p.col(i).dot(p.col(j));
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

// Shared with the parallel translation unit.
SigmaPair pencil_sigma_at(const LinearPencil& l, const MatrixPoint& x) { return sigma_at(l, x); }

}  // namespace ncr::kernels
