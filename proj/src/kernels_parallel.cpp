#include <omp.h>

#include "ncr/kernels.hpp"

namespace ncr::kernels {

SigmaPair pencil_sigma_at(const LinearPencil& l, const MatrixPoint& x);

std::vector<SigmaPair> pencil_sigmas_parallel(const LinearPencil& l,
                                              std::span<const MatrixPoint> points) {
  std::vector<SigmaPair> out(points.size());
  const long n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = pencil_sigma_at(l, points[static_cast<std::size_t>(i)]);
  return out;
}

RMat gram_parallel(const RMat& p) {
  const long k = static_cast<long>(p.cols());
  RMat h(k, k);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < k; ++i)
    for (long j = 0; j <= i; ++j) {
      const double v = p.col(i).dot(p.col(j));
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

void for_each_index_parallel(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const long m = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < m; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace ncr::kernels
