#include <doctest.h>

#include "ncr/expr.hpp"
#include "support.hpp"

using namespace ncr;

namespace {
RationalExpr p(const std::string& s, int g = 2, Field f = Field::Real) { return parse(s, g, f); }
}  // namespace

TEST_CASE("parser builds the expected trees") {
  const Expr e = p("inv(1 + inv(x2)*x1) + 1").root;
  REQUIRE(e.kind() == Kind::Sum);
  CHECK(e.rhs().kind() == Kind::Const);
  const Expr& inv = e.lhs();
  REQUIRE(inv.kind() == Kind::Inverse);
  REQUIRE(inv.child().kind() == Kind::Sum);
  const Expr& prod = inv.child().rhs();
  REQUIRE(prod.kind() == Kind::Product);
  CHECK(prod.lhs().kind() == Kind::Inverse);
  CHECK(prod.lhs().child().var() == 2);
  CHECK(prod.rhs().var() == 1);

  CHECK(p("0").root.kind() == Kind::Const);
  const Expr z = p("inv(0)").root;
  CHECK(z.kind() == Kind::Inverse);
  CHECK(z.child().value() == Scalar(0.0));
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(p("x1 +"), ParseError);
  CHECK_THROWS_AS(p("inv(x1"), ParseError);
  CHECK_THROWS_AS(p("x3"), InputError);
  CHECK_THROWS_AS(p("i*x1"), InputError);  // imaginary unit over R
  CHECK_NOTHROW(p("i*x1", 2, Field::Complex));
}

TEST_CASE("format then parse is the identity on random trees") {
  for (int trial = 0; trial < 1000; ++trial) {
    const Field f = trial % 3 == 0 ? Field::Complex : Field::Real;
    test::ExprGen gen(3, f, 1000 + trial, false);
    const Expr e = gen(1 + trial % 8);
    const Expr back = parse(format(e), 3, f).root;
    REQUIRE_MESSAGE(structurally_equal(e, back), format(e));
  }
}

TEST_CASE("tau follows the complexity rules") {
  CHECK(tau(p("x1").root) == 1);
  CHECK(tau(p("7").root) == 0);
  CHECK(tau(p("inv(2 + x1)*x2*inv(x1)").root) == 5);
  for (int trial = 0; trial < 100; ++trial) {
    test::ExprGen gen(2, Field::Complex, 77 + trial, false);
    const Expr e = gen(5);
    CHECK(tau(e) == tau(adjoint(e)));
    CHECK(tau(e) == tau(star(e)));
  }
}

TEST_CASE("sub-expression sets") {
  const Expr e = p("inv(2 + x1)*x2*inv(x1)").root;
  CHECK(subexpressions(e, false).size() == 8);
  CHECK(subexpressions(p("x1").root).size() == 1);
  const Expr ix = p("i*x1", 1, Field::Complex).root;
  bool found = false;
  auto minus_i = [](const Expr& c) { return c.kind() == Kind::Const && c.value() == Scalar(0.0, -1.0); };
  for (const Expr& q : subexpressions(ix))
    if (q.kind() == Kind::Product && (minus_i(q.lhs()) || minus_i(q.rhs()))) found = true;
  CHECK(found);
}

TEST_CASE("node counts") {
  const auto c = count_nodes(p("inv(1 + x1*x1)*2 + x2").root);
  CHECK(c.constants == 2);
  CHECK(c.symbols == 3);
  CHECK(c.inverses == 1);
}

TEST_CASE("strict evaluation matches the LU oracle") {
  for (int trial = 0; trial < 200; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    test::ExprGen gen(2, f, 500 + trial, false);
    const Expr e = gen(4);
    const MatrixPoint x = random_selfadjoint_point(2, 1 + trial % 4, f, 900 + trial);
    Mat want;
    const bool ok = test::oracle_eval(e, x, want);
    const EvalResult got = eval_strict(e, x);
    if (ok && got.defined()) CHECK((*got.value - want).norm() <= 1e-8 * (1.0 + want.norm()));
  }
}

TEST_CASE("strict evaluation reports the failing inverse") {
  const Expr e = p("inv(1 + x1*inv(x2)*inv(x2)*x1)").root;
  const EvalResult r = eval_strict(e, MatrixPoint::zeros(2, 1, Field::Real));
  CHECK_FALSE(r.defined());
  REQUIRE(r.failing);
  CHECK(format(r.failing) == "x2");
}

TEST_CASE("inv(1 + x1*x1) is a contraction") {
  const Expr e = p("inv(1 + x1*x1)", 1).root;
  for (int s = 0; s < 20; ++s) {
    const EvalResult r = eval_strict(e, random_selfadjoint_point(1, 1 + s % 5, Field::Real, s));
    REQUIRE(r.defined());
    CHECK(linalg::spectral_norm(*r.value) <= 1.0 + 1e-12);
  }
}

TEST_CASE("Moore-Penrose evaluation") {
  const Expr z = p("inv(0)").root;
  for (int s = 0; s < 20; ++s) CHECK(eval_mp(z, random_selfadjoint_point(2, 3, Field::Real, s)).isZero(0.0));
  const Expr e = p("inv(x1)*x1 - 1", 1).root;
  CHECK(eval_mp(e, MatrixPoint::zeros(1, 1, Field::Real))(0, 0) == Scalar(-1.0));
  // agrees with strict evaluation on the domain
  const Expr r = p("inv(1 + x1*x2)*x1 + inv(x2)", 2).root;
  for (int s = 0; s < 20; ++s) {
    const MatrixPoint x = random_selfadjoint_point(2, 1 + s % 4, Field::Real, 40 + s);
    const EvalResult st = eval_strict(r, x);
    if (!st.defined()) continue;
    CHECK((eval_mp(r, x) - *st.value).norm() <= 1e-8 * (1.0 + st.value->norm()));
  }
}

TEST_CASE("random self-adjoint points") {
  for (Field f : {Field::Real, Field::Complex}) {
    const MatrixPoint a = random_selfadjoint_point(3, 4, f, 12), b = random_selfadjoint_point(3, 4, f, 12);
    CHECK(a.selfadjoint);
    CHECK_NOTHROW(a.validate());
    for (int j = 0; j < 3; ++j) {
      CHECK((a.mats[j] - a.mats[j].adjoint()).norm() == 0.0);
      CHECK(a.mats[j] == b.mats[j]);
    }
  }
}

TEST_CASE("scalar centers") {
  auto c = find_scalar_center(p("x1*x2 + 3"), 20, 1);
  REQUIRE(c);
  CHECK((*c)[0] == 0.0);
  CHECK((*c)[1] == 0.0);
  c = find_scalar_center(p("inv(x1)", 1), 20, 1);
  REQUIRE(c);
  CHECK((*c)[0] != 0.0);
  c = find_scalar_center(p("inv(1 + x1*inv(x2)*inv(x2)*x1)"), 20, 1);
  REQUIRE(c);
  CHECK((*c)[1] != 0.0);
  CHECK_FALSE(find_scalar_center(p("inv(0)"), 10, 1));
}

TEST_CASE("shift substitutes x -> x + lambda") {
  const Expr s = shift(p("x1", 1).root, {1.0});
  const MatrixPoint x = random_selfadjoint_point(1, 3, Field::Real, 5);
  CHECK((*eval_strict(s, x).value - (x.mats[0] + Mat::Identity(3, 3))).norm() < 1e-14);
  const Expr e = p("inv(2 + x1*x2)*x1").root;
  CHECK(structurally_equal(shift(e, {0.0, 0.0}), e));
  const Expr sh = shift(e, {0.3, -0.7});
  for (int k = 0; k < 20; ++k) {
    const MatrixPoint y = random_selfadjoint_point(2, 2, Field::Real, 60 + k);
    const EvalResult a = eval_strict(sh, y), b = eval_strict(e, y.shifted({0.3, -0.7}));
    REQUIRE(a.defined() == b.defined());
    if (a.defined()) CHECK((*a.value - *b.value).norm() < 1e-9 * (1.0 + b.value->norm()));
  }
}
