#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ncr/pencil.hpp"

/// Data-parallel kernels. Each has an OpenMP version and a serial reference
/// with identical results (reductions are done in index order).
namespace ncr::kernels {

struct SigmaPair {
  double sigma = 0.0;
  double relative = 0.0;
};

std::vector<SigmaPair> pencil_sigmas_serial(const LinearPencil& l, std::span<const MatrixPoint> points);
std::vector<SigmaPair> pencil_sigmas_parallel(const LinearPencil& l,
                                              std::span<const MatrixPoint> points);

/// Gram matrix P^T P of the columns of p (Newton Hessian of the log-det barrier).
RMat gram_serial(const RMat& p);
RMat gram_parallel(const RMat& p);

/// Applies fn to every index in [0, n); fn must only write to its own slot.
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& fn);
void for_each_index_parallel(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ncr::kernels
