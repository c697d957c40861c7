#pragma once

#include <optional>
#include <vector>

#include "ncr/expr.hpp"
#include "ncr/pencil.hpp"

namespace ncr {

/// r(X) = (c* ⊗ I) L(X - lambda)^{-1} (b ⊗ I).
struct Realization {
  Field field = Field::Real;
  Vec c;
  Vec b;
  LinearPencil pencil;  // square, size d
  std::vector<double> center;

  Index size() const { return pencil.d; }
  int g() const { return pencil.g; }
};

/// Raised when a sub-expression is not defined at the center.
class CenterError : public InputError {
 public:
  CenterError(const std::string& msg, Expr where) : InputError(msg), where_(std::move(where)) {}
  const Expr& where() const { return where_; }

 private:
  Expr where_;
};

/// Compositional realization of e around the scalar point lambda.
Realization build(const RationalExpr& e, const std::vector<double>& center);

/// Controllable then observable reduction, after normalizing L(0) = I.
Realization minimize(const Realization& r);

/// nullopt when L(X - lambda) has condition number above the threshold.
std::optional<Mat> eval_realization(const Realization& r, const MatrixPoint& x, double cond_threshold = 1e12);

}  // namespace ncr
