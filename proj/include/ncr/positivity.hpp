#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncr/ellipticity.hpp"
#include "ncr/expr.hpp"
#include "ncr/realization.hpp"

namespace ncr {

/// Words over the atoms of r (its variables and the inverse sub-expressions
/// of Q), kept when numerically independent as functions.
struct RationalBasis {
  std::vector<Expr> atoms;
  std::vector<Expr> elements;  // elements[0] = 1
  std::vector<int> levels;     // word length of each element
  std::vector<int> atom;       // last atom appended (-1 for the constant word)
  std::vector<int> parent;     // element this word extends (-1 for the constant word)
  int k = 0;                   // requested degree
  int max_level = 0;           // largest level actually present
  bool truncated = false;      // a level was dropped because of the size cap
  double min_relative_sigma = 1.0;

  std::size_t size() const { return elements.size(); }
};

RationalBasis basis_of_Vk(const RationalExpr& e, int k, std::uint64_t seed, std::size_t cap = 64);

struct EquivalencePlan {
  int kappa = 0;
  int t = 0;
  Index dim_v = 0;             // dim V_{2t+1} as computed (see truncated)
  bool dim_truncated = false;
  double size_bound = 0.0;    // kappa (1 + (2t+1) dim^2)
  std::vector<Index> sizes;
  int samples_per_size = 0;
};

EquivalencePlan equivalence_plan(const RationalExpr& e, std::uint64_t seed = 1, std::size_t cap = 64,
                                 Index max_size = 6, int samples_per_size = 40);

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
  std::vector<Index> sizes;
  int points = 0;
};

struct SohsCertificate {
  Field field = Field::Real;
  int nvars = 0;
  int k = 0;
  RationalBasis basis;
  Mat G;
  std::vector<Expr> squares;
  EquivalencePlan plan;
  ResidualStats residual;
};

struct SohsOptions {
  std::optional<int> k;        // default 2 tau(r) + 1
  double tol = 1e-7;           // accepted negativity of max min eig G, relative to |G|
  double sdp_tol = 1e-10;      // duality gap of the Gram SDP
  std::uint64_t seed = 1;
  std::size_t cap = 64;
  Index max_size = 6;
  int samples_per_size = 40;
  bool escalate = true;        // retry once with a larger degree and cap
  double residual_tol = 1e-6;
};

/// Relative residual |r - sum s_j* s_j| / (1 + |r|) at fresh self-adjoint domain points.
ResidualStats sohs_residual(const RationalExpr& r, const std::vector<Expr>& squares, Index max_size,
                            int per_size, std::uint64_t seed);

std::optional<SohsCertificate> sohs_decompose(const RationalExpr& e, const SohsOptions& opts = {});

/// Direct sum over squares of [[c c*, L*], [-L, 0]] with vector (0; b).
Realization positively_elliptic_realization(const SohsCertificate& cert, std::uint64_t seed = 1);

/// Self-adjoint X with lambda_min(r_mp(X)) <= -sqrt(tol), built from the dual
/// of the Gram SDP by a GNS construction.
std::optional<MatrixPoint> mp_counterexample(const RationalExpr& e, int k, double tol, std::uint64_t seed,
                                             std::size_t cap = 64);

struct StrictPositivity {
  enum class Outcome { Positive, NotPositive, NotRegular, Inconclusive } outcome = Outcome::Inconclusive;
  double value_at_zero = 0.0;  // smallest eigenvalue of r(0)
  Verdict regular_verdict = Verdict::Inconclusive;
  Verdict inverse_verdict = Verdict::Inconclusive;
  std::string reason;
};
std::string to_string(StrictPositivity::Outcome o);

StrictPositivity strictly_positive(const RationalExpr& e, double tol = 1e-7, std::uint64_t seed = 1);

}  // namespace ncr
