#pragma once

// Shared between the SOHS solver and the counterexample extraction.

#include <vector>

#include "ncr/positivity.hpp"
#include "ncr/sdp.hpp"

namespace ncr::detail {

/// A self-adjoint domain point with the basis and r evaluated there.
struct SampledPoint {
  MatrixPoint x;
  std::vector<Mat> w;
  Mat r;
};

std::vector<SampledPoint> sample_basis(const RationalExpr& r, const RationalBasis& basis,
                                       const std::vector<Index>& sizes, int per_size, std::uint64_t seed);

/// Affine family of Gram matrices G with W* G W = r at the sampled points.
struct GramSystem {
  Field field = Field::Real;
  Index m = 0;
  bool consistent = false;
  double relative_residual = 0.0;
  RVec point;        // Hermitian coordinates of a particular solution
  RMat directions;   // null directions (W* G W = 0 at all samples)
  LmiProblem lmi;    // embedded G(z)

  Mat gram(const RVec& z) const;
};

GramSystem gram_system(const std::vector<SampledPoint>& pts, Index m, Field field);

std::vector<Index> size_range(Index max_size);

}  // namespace ncr::detail
