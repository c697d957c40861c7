#pragma once

#include <string>
#include <vector>

#include "ncr/linalg.hpp"

namespace ncr {

/// S(y) = F_0 + sum_i y_i F_i, all real symmetric of size m.
struct LmiProblem {
  RMat base;
  std::vector<RMat> directions;
  std::string description;

  Index m() const { return base.rows(); }
  Index k() const { return static_cast<Index>(directions.size()); }
  RMat at(const RVec& y) const;
};

enum class SdpStatus { OptimalInterior, OptimalBoundary, Infeasible, NumericalFailure };
std::string to_string(SdpStatus s);

struct LmiSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  double t_star = 0.0;
  RVec y;
  RMat primal;  // S(y)
  RMat dual;    // Z, trace one
  int newton_steps = 0;
  std::string message;
};

struct SdpOptions {
  double tol = 1e-8;
  int max_newton = 60;  // per centering
  double mu_factor = 0.2;
  double ball_radius = 1e4;
  /// Use the OpenMP Hessian kernel (the serial one gives identical results).
  bool parallel = true;
};

/// maximize t subject to S(y) - t I >= 0, by log-barrier path following.
LmiSolution solve_max_min_eig(const LmiProblem& p, const SdpOptions& opts = {});

/// A feasible point of {S(y) >= 0} of maximal rank. Intended for problems
/// whose optimal value is (numerically) zero; strictly feasible problems
/// return the max-min-eig maximizer.
LmiSolution max_rank_feasible(const LmiProblem& p, const SdpOptions& opts = {});

/// Solutions of  E v = 0,  n . v = value  as  v = point + directions * z.
struct AffineSubspace {
  bool feasible = false;
  RVec point;
  RMat directions;          // orthonormal columns
  Index homogeneous_dim = 0;  // dim ker E, before normalization
};

AffineSubspace eliminate_equalities(Index vars, const RMat& equalities, const RVec& normalization,
                                    double value);

/// Real coordinates of a self-adjoint matrix, orthonormal for the trace inner
/// product: diagonal, sqrt(2) Re of the strict upper part, and for C also
/// sqrt(2) Im of it. Length m(m+1)/2 (R) or m^2 (C).
RVec hermitian_coords(const Mat& h, Field field);
Index hermitian_coords_size(Index m, Field field);
Mat hermitian_from_coords(const RVec& x, Index m, Field field);

/// Real symmetric embedding used to hand complex problems to the solver, and
/// its inverse on matrices of the embedded form.
RMat embed_hermitian(const Mat& h, Field field);
Mat unembed_hermitian(const RMat& s, Index m, Field field);

}  // namespace ncr
