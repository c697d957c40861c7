#pragma once

#include <cstdint>
#include <vector>

#include "ncr/expr.hpp"
#include "ncr/linalg.hpp"

namespace ncr {

/// L = A_0 + sum_j A_j x_j with d x e coefficients.
struct LinearPencil {
  Field field = Field::Real;
  int g = 0;
  Index d = 0;
  Index e = 0;
  std::vector<Mat> coeffs;  // A_0, ..., A_g

  static LinearPencil zeros(int g, Index d, Index e, Field field);
  /// Throws InputError unless all g+1 coefficients are d x e.
  void validate() const;
  const Mat& operator[](int j) const { return coeffs[static_cast<std::size_t>(j)]; }
  Mat& operator[](int j) { return coeffs[static_cast<std::size_t>(j)]; }
};

/// L(X) = A_0 ⊗ I + sum_j A_j ⊗ X_j.
Mat eval(const LinearPencil& l, const MatrixPoint& x);

/// Re(D A_0), ..., Re(D A_g).
std::vector<Mat> real_compress(const Mat& dmat, const LinearPencil& l);

/// Coefficients A_j V. Throws InputError when V is rank deficient.
LinearPencil restrict_columns(const LinearPencil& l, const Mat& v);

/// Coefficients A_j*, size e x d.
LinearPencil adjoint(const LinearPencil& l);

/// Coefficients P A_j.
LinearPencil left_multiply(const Mat& p, const LinearPencil& l);

struct FullRankSample {
  double min_sigma = 0.0;           // smallest sigma_min(L(X)) seen
  double min_relative_sigma = 0.0;  // smallest sigma_min(L(X)) / ||L(X)||
  MatrixPoint worst;                // argmin of the relative value
  int samples = 0;
};

/// 1..min((g+1) e^2, 12)
std::vector<Index> default_sample_sizes(const LinearPencil& l);

/// One-sided probabilistic full-rank oracle over random self-adjoint (or
/// general) tuples; `trials` points per size.
FullRankSample full_rank_sample(const LinearPencil& l, const std::vector<Index>& sizes, int trials,
                                std::uint64_t seed, bool selfadjoint = true);

/// True iff all words of length d in A_0^{-1} A_j vanish. Requires square L
/// with invertible A_0.
bool jointly_nilpotent(const LinearPencil& l);

}  // namespace ncr
