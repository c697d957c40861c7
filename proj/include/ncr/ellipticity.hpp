#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncr/pencil.hpp"
#include "ncr/sdp.hpp"

namespace ncr {

enum class Verdict { StablyElliptic, Elliptic, NotElliptic, Inconclusive };
std::string to_string(Verdict v);

struct ChainStep {
  Mat D;               // e_k x d
  RVec eigs;           // eigenvalues of Re(D A_0), ascending
  Mat V;               // orthonormal kernel basis; e_k x 0 on the final step
  double t_star = 0.0;
  Index homogeneous_dim = 0;  // dim of {D : Re(D A_j) = 0, j >= 1}
};

struct EllipticityCertificate {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<ChainStep> chain;
  bool transposed = false;  // chain refers to L* (input had d < e)
  std::optional<double> epsilon;
  std::optional<MatrixPoint> witness;
  // NotElliptic: PSD matrices on the last restricted pencil, each orthogonal to every
  // Re(D A_0) with Re(D A_j) = 0 whose range avoids the earlier ones; jointly they
  // force Re(D A_0) = 0.
  std::vector<Mat> exposing;
  std::string message;
};

struct ClassifyOptions {
  double tol = 1e-7;  // boundary band for t_star
  SdpOptions sdp;
  bool want_witness = true;
  double witness_delta = 1e-6;
};

EllipticityCertificate classify(const LinearPencil& l, const ClassifyOptions& opts = {});

struct CheckResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Solver-independent re-check of every chain step and of the witness.
CheckResult verify_certificate(const LinearPencil& l, const EllipticityCertificate& cert, double tol);

/// eps = ||R^{-1}||^{-4} ||D||^{-2} with Re(D A_0) = R* R.
/// Throws InputError when Re(D A_0) is not positive definite or Re(D A_j) != 0.
double epsilon_bound(const Mat& dmat, const LinearPencil& l, double tol = 1e-9);

/// Self-adjoint point of size e at which L (d >= e) loses rank, from the
/// GNS construction; nullopt when extraction fails.
std::optional<MatrixPoint> singular_witness(const LinearPencil& l, double tol = 1e-7,
                                            double delta = 1e-6, const SdpOptions& sdp = {});

}  // namespace ncr
