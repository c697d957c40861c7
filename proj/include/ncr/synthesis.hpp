#pragma once

#include <cstdint>
#include <vector>

#include "ncr/expr.hpp"
#include "ncr/realization.hpp"

namespace ncr {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Entries A_0 + sum_j A_j (x_j - lambda_j) of a pencil as expressions.
ExprMatrix pencil_entries(const LinearPencil& l, const std::vector<double>& center);

/// Entries of M^{-1} for M invertible at every self-adjoint point, built so
/// that every inverse node wraps a sum of hermitian squares that is positive
/// definite there. Throws InputError when sampling finds a self-adjoint
/// point at which one of these inverses is singular.
ExprMatrix regular_inverse_expression(const ExprMatrix& m, int g, Field field, std::uint64_t seed = 1);

/// An expression for the same function whose strict domain is all
/// self-adjoint tuples: minimal realization, certified elliptic pencil, then
/// c* L^{-1} b with the inverse synthesized above. Throws InputError when the
/// input cannot be certified regular.
RationalExpr regular_expression_of(const RationalExpr& e, std::uint64_t seed = 1);

}  // namespace ncr
