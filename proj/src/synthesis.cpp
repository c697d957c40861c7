#include "ncr/synthesis.hpp"

#include "ncr/ellipticity.hpp"

namespace ncr {

namespace {

Expr add(const Expr& a, const Expr& b) { return simplified_sum(a, b); }
Expr mul(const Expr& a, const Expr& b) { return simplified_product(a, b); }
Expr neg(const Expr& a) { return mul(constant(-1.0), a); }

// inv(e), folding nonzero constants.
Expr inv(const Expr& e) {
  if (e.kind() == Kind::Const && e.value() != Scalar(0.0)) return constant(1.0 / e.value());
  return inverse(e);
}

using Block = ExprMatrix;

Block adjoint_of(const Block& m) {
  const std::size_t r = m.size(), c = r ? m[0].size() : 0;
  Block out(c, std::vector<Expr>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j][i] = adjoint(m[i][j]);
  return out;
}

Block multiply(const Block& a, const Block& b) {
  const std::size_t r = a.size(), k = b.size(), c = k ? b[0].size() : 0;
  Block out(r, std::vector<Expr>(c, constant(0.0)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t t = 0; t < k; ++t) out[i][j] = add(out[i][j], mul(a[i][t], b[t][j]));
  return out;
}

// Inverse of a self-adjoint matrix P that is positive definite at every
// self-adjoint point, by pivoting on the (1,1) entry and recursing on the
// Schur complement.
Block hermitian_inverse(const Block& p) {
  const std::size_t n = p.size();
  if (n == 1) return {{inv(p[0][0])}};
  const Expr sinv = inv(p[0][0]);
  // q = P[1:, 0], q* = P[0, 1:].
  Block t(n - 1, std::vector<Expr>(n - 1));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) t[i - 1][j - 1] = add(p[i][j], neg(mul(mul(p[i][0], sinv), p[0][j])));
  const Block tinv = hermitian_inverse(t);
  // u = T^{-1} q s^{-1}, column of length n-1.
  std::vector<Expr> u(n - 1, constant(0.0)), w(n - 1, constant(0.0));
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = 0; k + 1 < n; ++k) {
      u[i] = add(u[i], mul(tinv[i][k], mul(p[k + 1][0], sinv)));
      w[i] = add(w[i], mul(mul(sinv, p[0][k + 1]), tinv[k][i]));  // s^{-1} q* T^{-1}
    }
  Block out(n, std::vector<Expr>(n));
  Expr corner = sinv;
  for (std::size_t k = 0; k + 1 < n; ++k) corner = add(corner, mul(w[k], mul(p[k + 1][0], sinv)));
  out[0][0] = corner;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[0][i + 1] = neg(w[i]);
    out[i + 1][0] = neg(u[i]);
    for (std::size_t j = 0; j + 1 < n; ++j) out[i + 1][j + 1] = tinv[i][j];
  }
  return out;
}

void validate_by_sampling(const Block& m, int g, Field field, std::uint64_t seed, int per_size, Index max_size) {
  for (Index n = 1; n <= max_size; ++n)
    for (int t = 0; t < per_size; ++t) {
      const MatrixPoint x = random_selfadjoint_point(g, n, field, mix_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)));
      for (const auto& row : m)
        for (const auto& e : row) {
          EvalResult r = eval_strict(e, x);
          if (!r.defined())
            throw InputError("singular self-adjoint point found for " + format(r.failing) + " (size " + std::to_string(n) + ")");
        }
    }
}

}  // namespace

ExprMatrix pencil_entries(const LinearPencil& l, const std::vector<double>& center) {
  ExprMatrix out(static_cast<std::size_t>(l.d), std::vector<Expr>(static_cast<std::size_t>(l.e)));
  for (Index i = 0; i < l.d; ++i)
    for (Index k = 0; k < l.e; ++k) {
      Scalar c0 = l[0](i, k);
      for (int j = 1; j <= l.g; ++j) c0 -= l[j](i, k) * center[static_cast<std::size_t>(j - 1)];
      Expr e = constant(c0);
      for (int j = 1; j <= l.g; ++j) e = add(e, mul(constant(l[j](i, k)), variable(j)));
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = e;
    }
  return out;
}

ExprMatrix regular_inverse_expression(const ExprMatrix& m, int g, Field field, std::uint64_t seed) {
  if (m.empty() || m.size() != m[0].size()) throw InputError("regular_inverse_expression: matrix must be square");
  const Block mstar = adjoint_of(m);
  const Block p = multiply(mstar, m);
  const Block pinv = hermitian_inverse(p);
  Block out = multiply(pinv, mstar);
  validate_by_sampling(out, g, field, seed, 4, 5);
  return out;
}

RationalExpr regular_expression_of(const RationalExpr& e, std::uint64_t seed) {
  auto center = find_scalar_center(e, 64, seed);
  if (!center) throw InputError("no scalar center: expression cannot be certified regular");
  const Realization r = minimize(build(e, *center));
  const EllipticityCertificate cert = classify(r.pencil);
  if (cert.verdict != Verdict::StablyElliptic && cert.verdict != Verdict::Elliptic)
    throw InputError("expression is not certified regular (pencil verdict " + to_string(cert.verdict) + ")");
  const ExprMatrix minv = regular_inverse_expression(pencil_entries(r.pencil, r.center), e.nvars, e.field, seed);
  Expr acc = constant(0.0);
  for (Index i = 0; i < r.size(); ++i)
    for (Index k = 0; k < r.size(); ++k) {
      const Scalar w = std::conj(r.c(i)) * r.b(k);
      if (std::abs(w) == 0.0) continue;
      acc = add(acc, mul(constant(w), minv[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
    }
  RationalExpr out{acc, e.field, e.nvars};
  validate_by_sampling({{acc}}, e.nvars, e.field, mix_seed(seed, 99), 5, 6);
  return out;
}

}  // namespace ncr
