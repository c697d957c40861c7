// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "ncr/commands.hpp"
#include "ncr/ellipticity.hpp"
#include "ncr/positivity.hpp"
#include "ncr/realization.hpp"
#include "support.hpp"

using namespace ncr;

namespace {

const char* kEx1 = "inv((1 - x1*x2)*(1 - x2*x1) + x1*x1)";
const char* kEx2 = "inv(2 + (x1*x2 - x1 - 2*x2)*inv(1 + x2*x2) + (x1 + x2 - 1)*inv(1 + x2*x2)*x1)";
const char* kEx3 = "inv(1 + x2*x2 - ((1-i)*x1 + x2)*inv(1 + 2*x1*x1)*((1+i)*x1 + x2))";
const char* kEx4 =
    "inv((1 + (x2*x1)*(x2*x1)*x2*x2)*(1 + x2*x2*(x1*x2)*(x1*x2)) - (x1*x2 - x2*x1)*(x1*x2 - x2*x1))";
const char* kPos = "x2*x2 - x2*x1*inv(1 + x1*x1)*x1*x2";

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Realization minimal_of(const char* text, Field f) {
  const RationalExpr e = parse(text, 2, f);
  return minimize(build(e, *find_scalar_center(e, 64, 1)));
}

Index rank_of(const RVec& eigs, double tol) {
  Index r = 0;
  for (Index i = 0; i < eigs.size(); ++i) r += eigs(i) > tol ? 1 : 0;
  return r;
}

Outcome c1() {
  Outcome o;
  const LinearPencil l = test::load_pencil("kernel_step_pencil.json");
  const auto c = classify(l);
  o.require(c.verdict == Verdict::Elliptic, "verdict " + to_string(c.verdict));
  o.require(c.chain.size() == 2, "chain length");
  if (!o.ok) return o;
  o.require(c.chain[0].V.cols() == 1 && std::abs(std::abs(c.chain[0].V(2, 0)) - 1.0) < 1e-7, "step-1 kernel is not span(e3)");
  o.require(classify(restrict_columns(l, c.chain[0].V)).verdict == Verdict::StablyElliptic, "restricted pencil not stably elliptic");
  o.require(verify_certificate(l, c, 1e-7).ok, "verification");
  return o;
}

Outcome c2() {
  Outcome o;
  const CommandResult r = cmd_regular(kEx1, RunConfig{});
  o.require(r.exit_code == kExitOk, "exit code");
  o.require(r.report.value("minimal_size", -1) == 4, "minimal size");
  o.require(r.report.value("regular", "") == "yes", "regular");
  o.require(r.report.value("pencil_verdict", "") == "elliptic", "not elliptic-only");
  const auto s = cmd_stably_bounded(kEx1, RunConfig{});
  o.require(s.report.value("stably_bounded", "") == "no", "stably bounded");
  const Realization m = minimal_of(kEx1, Field::Real);
  const auto c = classify(m.pencil);
  o.require(!c.chain.empty() && rank_of(c.chain[0].eigs, 1e-6) == 2, "step-1 rank");
  return o;
}

Outcome c3() {
  Outcome o;
  const CommandResult r = cmd_stably_bounded(kEx2, RunConfig{});
  o.require(r.exit_code == kExitOk && r.report.value("stably_bounded", "") == "yes", "not stably bounded");
  const Realization m = minimal_of(kEx2, Field::Real);
  const auto c = classify(m.pencil);
  o.require(c.verdict == Verdict::StablyElliptic && c.epsilon && *c.epsilon > 0, "no epsilon");
  if (!o.ok) return o;
  const double eps = epsilon_bound(c.chain[0].D, m.pencil);
  for (int s = 0; s < 200; ++s) {
    const MatrixPoint x = random_selfadjoint_point(2, 1 + s % 6, Field::Real, mix_seed(3, s));
    const double sig = test::oracle_pencil_sigma(m.pencil, x);
    o.require(sig * sig >= eps - 1e-7, "sampled sigma below epsilon");
  }
  return o;
}

Outcome c4() {
  Outcome o;
  RunConfig cfg;
  cfg.field = Field::Complex;
  const CommandResult r = cmd_regular(kEx3, cfg);
  o.require(r.exit_code == kExitOk && r.report.value("regular", "") == "no", "regular verdict");
  const Realization m = minimal_of(kEx3, Field::Complex);
  const MatrixPoint x = io::point_from_json(io::read_json_file(test::fixture("example3_point.json")));
  const double sig = linalg::min_singular_value(eval(m.pencil, x.shifted({-m.center[0], -m.center[1]})));
  o.require(sig <= 1e-6, "explicit pair is not singular: " + std::to_string(sig));
  return o;
}

Outcome c5() {
  Outcome o;
  const Realization m = minimal_of(kEx4, Field::Real);
  o.require(m.size() == 15, "minimal size " + std::to_string(m.size()));
  const auto c = classify(m.pencil);
  o.require(c.verdict == Verdict::NotElliptic, "verdict " + to_string(c.verdict));
  o.require(verify_certificate(m.pencil, c, 1e-7).ok, "certificate");
  const auto s = full_rank_sample(m.pencil, {2}, 500, 17);
  o.require(s.min_relative_sigma > 1e-8, "singular point found at size 2");
  return o;
}

Outcome c6() {
  Outcome o;
  o.require(build(parse("x1", 1, Field::Real), {0.0}).size() == 2, "build(x1)");
  o.require(minimize(build(parse("x1*x1", 1, Field::Real), {0.0})).size() == 3, "minimize(build(x1^2))");
  return o;
}

Outcome c7() {
  Outcome o;
  const RationalExpr r = parse(kPos, 2, Field::Real);
  const auto cert = sohs_decompose(r);
  o.require(cert.has_value(), "no certificate");
  if (!o.ok) return o;
  o.require(cert->k == 2 * tau(r.root) + 1, "degree");
  const auto res = sohs_residual(r, cert->squares, 6, 40, 424242);
  o.require(res.max <= 1e-6, "residual " + std::to_string(res.max));
  const Realization pe = positively_elliptic_realization(*cert);
  o.require(linalg::hermitian_eig(linalg::real_part(pe.pencil[0])).eigenvalues(0) >= -1e-12, "Re A0 not PSD");
  for (int j = 1; j <= pe.g(); ++j) o.require(linalg::real_part(pe.pencil[j]).norm() <= 1e-12, "Re Aj nonzero");
  const auto v = classify(pe.pencil).verdict;
  o.require(v == Verdict::Elliptic || v == Verdict::StablyElliptic, "realization pencil " + to_string(v));
  return o;
}

Outcome c8() {
  Outcome o;
  const Expr z = parse("inv(0)", 2, Field::Real).root;
  for (int s = 0; s < 20; ++s)
    o.require(eval_mp(z, random_selfadjoint_point(2, 1 + s % 4, Field::Real, s)).isZero(0.0), "inv(0) nonzero");
  const Expr e = parse("inv(x1)*x1 - 1", 1, Field::Real).root;
  o.require(eval_mp(e, MatrixPoint::zeros(1, 1, Field::Real))(0, 0) == Scalar(-1.0), "value at 0");
  return o;
}

Outcome c9() {
  Outcome o;
  // (a) random pencils against the sampling oracle
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200 && o.ok; ++trial) {
    const Field f = trial % 4 == 0 ? Field::Complex : Field::Real;
    const int g = 1 + trial % 3;
    const Index d = 1 + (trial / 3) % 5, e = 1 + (trial / 15) % 5;
    LinearPencil l = LinearPencil::zeros(g, d, e, f);
    for (auto& a : l.coeffs) a = test::random_matrix(d, e, f, rng);
    if (trial % 7 == 0) l[0].setZero();
    const auto c = classify(l);
    if (c.verdict == Verdict::Inconclusive) continue;
    o.require(verify_certificate(l, c, 1e-7).ok, "certificate of random pencil " + std::to_string(trial));
    if (c.verdict == Verdict::StablyElliptic) {
      const auto s = full_rank_sample(c.transposed ? adjoint(l) : l, {1, 2, 3}, 6, mix_seed(5, trial));
      o.require(s.min_sigma * s.min_sigma >= *c.epsilon - 1e-7, "sampled point below epsilon, pencil " + std::to_string(trial));
    }
    if (c.witness) {
      const Mat v = eval(c.transposed ? adjoint(l) : l, *c.witness);
      o.require(linalg::min_singular_value(v) <= 1e-5 * (1.0 + linalg::spectral_norm(v)), "witness " + std::to_string(trial));
    }
  }
  // (b) parser round trip
  for (int trial = 0; trial < 1000 && o.ok; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    test::ExprGen gen(3, f, mix_seed(11, trial), false);
    const Expr e = gen(1 + trial % 8);
    o.require(structurally_equal(e, parse(format(e), 3, f).root), "round trip " + format(e));
  }
  // (c) linear algebra identities
  for (int trial = 0; trial < 50 && o.ok; ++trial) {
    const Field f = trial % 2 ? Field::Complex : Field::Real;
    const Mat a = test::random_matrix(5, 3, f, rng) * test::random_matrix(3, 4, f, rng);
    const Mat pa = linalg::pinv(a);
    o.require((a * pa * a - a).norm() <= 1e-8 * (1 + a.norm()), "Penrose 1");
    o.require((pa * a * pa - pa).norm() <= 1e-8 * (1 + pa.norm()), "Penrose 2");
    o.require((a * pa - (a * pa).adjoint()).norm() <= 1e-8, "Penrose 3");
    o.require((pa * a - (pa * a).adjoint()).norm() <= 1e-8, "Penrose 4");
    const Mat b = test::random_matrix(5, 5, f, rng);
    const Mat h = b + b.adjoint();
    const auto es = linalg::hermitian_eig(h);
    o.require((es.eigenvectors * es.eigenvalues.cast<Scalar>().asDiagonal() * es.eigenvectors.adjoint() - h).norm() <= 1e-10 * h.norm(), "eigen reconstruction");
    const Mat p = test::random_matrix(2, 2, f, rng), q = test::random_matrix(2, 2, f, rng);
    const Mat r = test::random_matrix(2, 2, f, rng), s = test::random_matrix(2, 2, f, rng);
    o.require((linalg::kron(p, q) * linalg::kron(r, s) - linalg::kron(p * r, q * s)).norm() <= 1e-12 * (1 + (p * r).norm() * (q * s).norm()), "Kronecker mixed product");
  }
  // (d) realizations of regular-by-construction expressions
  for (int trial = 0; trial < 500 && o.ok; ++trial) {
    const Field f = trial % 5 == 0 ? Field::Complex : Field::Real;
    test::ExprGen gen(2, f, mix_seed(13, trial), true);
    const RationalExpr e{gen(3), f, 2};
    const Realization m = minimize(build(e, {0.0, 0.0}));
    const MatrixPoint x = random_selfadjoint_point(2, 1 + trial % 4, f, mix_seed(17, trial));
    Mat want;
    if (!test::oracle_eval(e.root, x, want)) {
      o.require(false, "oracle failed on a regular expression");
      break;
    }
    const auto got = eval_realization(m, x);
    o.require(got && (*got - want).norm() <= 1e-7 * (1.0 + want.norm()), "realization mismatch for " + format(e.root));
  }
  return o;
}

Outcome c10() {
  Outcome o;
  const LinearPencil zero = test::load_pencil("zero_pencil.json");
  const auto cz = classify(zero);
  o.require(cz.verdict == Verdict::NotElliptic && verify_certificate(zero, cz, 1e-7).ok, "zero pencil");

  const RationalExpr m1 = parse("0 - 1", 1, Field::Real);
  o.require(!sohs_decompose(m1).has_value(), "-1 has a certificate");
  const auto x = mp_counterexample(m1, 1, 1e-7, 1);
  o.require(x && linalg::hermitian_eig(linalg::real_part(eval_mp(m1.root, *x))).eigenvalues(0) <= -std::sqrt(1e-7), "counterexample");

  const LinearPencil l2 = test::load_pencil("example2_pencil.json");
  auto c = classify(l2);
  c.chain[0].D *= -1.0;
  o.require(!verify_certificate(l2, c, 1e-7).ok, "negated D accepted");
  const LinearPencil l3 = test::load_pencil("example3_pencil.json");
  auto w = classify(l3);
  if (w.witness) w.witness->mats[1] *= 2.0;
  w.exposing.clear();
  o.require(!verify_certificate(l3, w, 1e-7).ok, "moved witness accepted");
  EllipticityCertificate fake;
  fake.verdict = Verdict::StablyElliptic;
  fake.chain.push_back({Mat::Identity(2, 2), RVec::Ones(2), Mat(2, 0), 1.0, 1});
  o.require(!verify_certificate(zero, fake, 1e-7).ok, "fake certificate for the zero pencil");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"kernel-step pencil is elliptic via a two-step chain", c1},
      {"first worked example: regular, not stably bounded", c2},
      {"second worked example: stably bounded, epsilon respected", c3},
      {"third worked example (C): not regular, explicit singular pair", c4},
      {"fourth worked example: size 15, not regular", c5},
      {"realization sizes of x1 and x1^2", c6},
      {"SOHS certificate and positively elliptic realization", c7},
      {"Moore-Penrose evaluation fixtures", c8},
      {"property suite", c9},
      {"negative controls", c10},
  };
  int failures = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o.ok = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", n, name, secs, o.ok ? "" : " -- ",
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
