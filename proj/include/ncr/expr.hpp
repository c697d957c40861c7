#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncr/linalg.hpp"

namespace ncr {

enum class Kind { Const, Var, Sum, Product, Inverse, Star };

class Node;

/// Immutable handle to an nc rational expression tree. Sub-trees are shared.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  const Node& operator*() const { return *node_; }
  const Node* operator->() const { return node_.get(); }
  const Node* get() const { return node_.get(); }
  explicit operator bool() const { return static_cast<bool>(node_); }

  Kind kind() const;
  Scalar value() const;  // Const only
  int var() const;       // Var only, 1-based
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& child() const { return lhs(); }

 private:
  std::shared_ptr<const Node> node_;
};

class Node {
 public:
  Kind kind;
  Scalar value{0.0, 0.0};
  int var = 0;
  Expr lhs;
  Expr rhs;
};

// Smart constructors. Sum/Product of two constants fold, star(star(e)) = e,
// star of a constant conjugates. Inverse is never folded.
Expr constant(Scalar c);
Expr variable(int j);
Expr sum(const Expr& a, const Expr& b);
Expr product(const Expr& a, const Expr& b);
Expr inverse(const Expr& a);
Expr star(const Expr& a);
/// Product(Const(-1), e), or a folded constant.
Expr negate(const Expr& a);
Expr difference(const Expr& a, const Expr& b);

// Builders used by synthesis code: they drop additive zeros and
// multiplicative ones, and fold constants.
Expr simplified_sum(const Expr& a, const Expr& b);
Expr simplified_product(const Expr& a, const Expr& b);
Expr linear_combination(const std::vector<Scalar>& coeffs, const std::vector<Expr>& terms,
                        double drop_below = 0.0);

/// Fully parenthesized text form; re-parses to a structurally equal tree.
std::string format(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

/// The involution pushed to the leaves: (ab)* = b*a*, x_j* = x_j, alpha* = conj(alpha).
Expr adjoint(const Expr& e);

/// Complexity: consts 0, vars 1, sum max, product sum, inverse doubles.
int tau(const Expr& e);

/// Number of Const leaves, Var leaves and Inverse nodes.
struct NodeCounts {
  int constants = 0;
  int symbols = 0;
  int inverses = 0;
};
NodeCounts count_nodes(const Expr& e);

/// Largest variable index occurring in e (0 if none).
int max_variable(const Expr& e);

/// An expression together with its field and number of variables.
struct RationalExpr {
  Expr root;
  Field field = Field::Real;
  int nvars = 0;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Grammar:
///   expr   := term { ("+"|"-") term }
///   term   := factor { "*" factor }
///   factor := ["-"] atom
///   atom   := number | "i" | var | "inv" "(" expr ")" | "star" "(" expr ")" | "(" expr ")"
RationalExpr parse(const std::string& text, int g, Field field);

/// The set Q: every sub-expression of e together with its adjoint,
/// deduplicated by structural equality, in discovery order (children first).
std::vector<Expr> subexpressions(const Expr& e, bool star_closed = true);

/// g square matrices of a common size n.
struct MatrixPoint {
  Field field = Field::Real;
  Index n = 1;
  std::vector<Mat> mats;
  bool selfadjoint = false;

  int g() const { return static_cast<int>(mats.size()); }
  static MatrixPoint zeros(int g, Index n, Field field);
  static MatrixPoint scalars(const std::vector<double>& values, Field field);
  MatrixPoint shifted(const std::vector<double>& lambda) const;
  MatrixPoint adjoint() const;
  /// Validates sizes and the self-adjoint flag; throws InputError.
  void validate() const;
};

/// X ⊕ Y componentwise.
MatrixPoint direct_sum(const MatrixPoint& x, const MatrixPoint& y);

struct EvalOptions {
  double cond_threshold = 1e12;
  /// Values with sigma_min at or below this are also treated as singular.
  double abs_floor = 0.0;
};

struct EvalResult {
  std::optional<Mat> value;
  Expr failing;  // first sub-expression whose inverse was singular

  bool defined() const { return value.has_value(); }
};

/// Strict evaluation; undefined when some inverted value has condition
/// number above the threshold.
EvalResult eval_strict(const Expr& e, const MatrixPoint& x, const EvalOptions& opts = {});

/// Moore-Penrose evaluation: every inverse becomes a pseudoinverse.
Mat eval_mp(const Expr& e, const MatrixPoint& x, double pinv_rtol = linalg::kPinvRtol);

/// g independent self-adjoint Gaussian matrices, scaled so ||X_j|| = O(1).
MatrixPoint random_selfadjoint_point(int g, Index n, Field field, std::uint64_t seed);
/// General (non-self-adjoint) Gaussian tuple.
MatrixPoint random_general_point(int g, Index n, Field field, std::uint64_t seed);

/// Scalar point lambda with e defined at lambda (every sub-expression is then
/// defined too). Tries 0 first, then random scalars of growing magnitude.
std::optional<std::vector<double>> find_scalar_center(const RationalExpr& e, int attempts,
                                                      std::uint64_t seed);
/// Center valid for several expressions at once.
std::optional<std::vector<double>> find_common_center(const std::vector<Expr>& es, int g,
                                                      Field field, int attempts,
                                                      std::uint64_t seed);

/// Substitutes x_j -> x_j + lambda_j (zero shifts leave the variable untouched).
Expr shift(const Expr& e, const std::vector<double>& lambda);

/// Deterministic seed mixing for split streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace ncr
