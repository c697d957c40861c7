#include "ncr/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ncr/synthesis.hpp"

namespace ncr {

namespace {

using io::Json;

constexpr int kMaxVars = 1 << 20;

RationalExpr parse_expr(const std::string& text, const RunConfig& cfg, int g = 0) {
  RationalExpr e = parse(text, g > 0 ? g : kMaxVars, cfg.field);
  if (g <= 0) e.nvars = max_variable(e.root);
  return e;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <class F>
CommandResult guarded(const char* name, F&& body) {
  try {
    CommandResult r = body();
    r.report["command"] = name;
    return r;
  } catch (const CenterError& e) {
    CommandResult r;
    r.exit_code = kExitNoCenter;
    r.report["command"] = name;
    r.report["error"] = e.what();
    r.text = std::string("error: ") + e.what() + "\n";
    return r;
  } catch (const InputError& e) {
    CommandResult r;
    r.exit_code = kExitInput;
    r.report["command"] = name;
    r.report["error"] = e.what();
    r.text = std::string("error: ") + e.what() + "\n";
    return r;
  } catch (const nlohmann::json::exception& e) {
    CommandResult r;
    r.exit_code = kExitInput;
    r.report["command"] = name;
    r.report["error"] = std::string("malformed JSON: ") + e.what();
    r.text = std::string("error: malformed JSON: ") + e.what() + "\n";
    return r;
  }
}

std::vector<double> center_of(const RationalExpr& e, const RunConfig& cfg) {
  auto c = find_scalar_center(e, cfg.attempts, cfg.seed);
  if (!c) throw CenterError("no scalar center found for " + format(e.root) + " after " + std::to_string(cfg.attempts) + " attempts", e.root);
  return *c;
}

ClassifyOptions classify_options(const RunConfig& cfg) {
  ClassifyOptions o;
  o.tol = cfg.tol;
  return o;
}

struct PencilRun {
  EllipticityCertificate cert;
  CheckResult check;
};

PencilRun classify_checked(const LinearPencil& l, const RunConfig& cfg) {
  PencilRun run;
  run.cert = classify(l, classify_options(cfg));
  if (run.cert.verdict != Verdict::Inconclusive) {
    run.check = verify_certificate(l, run.cert, cfg.tol);
    if (!run.check) {
      run.cert.message = "certificate failed verification: " + run.check.reason;
      run.cert.verdict = Verdict::Inconclusive;
    }
  } else {
    run.check = {false, run.cert.message};
  }
  return run;
}

Json sampling_summary(const LinearPencil& l, const RunConfig& cfg) {
  std::vector<Index> sizes = default_sample_sizes(l);
  if (static_cast<Index>(sizes.size()) > cfg.max_size * 2) sizes.resize(static_cast<std::size_t>(cfg.max_size * 2));
  const FullRankSample s = full_rank_sample(l, sizes, 20, mix_seed(cfg.seed, 77));
  Json j;
  j["samples"] = s.samples;
  j["max_size"] = sizes.empty() ? 0 : sizes.back();
  j["min_sigma"] = s.min_sigma;
  j["min_relative_sigma"] = s.min_relative_sigma;
  return j;
}

std::string verdict_phrase(Verdict v) {
  switch (v) {
    case Verdict::StablyElliptic: return "stably elliptic";
    case Verdict::Elliptic: return "elliptic, not stably";
    case Verdict::NotElliptic: return "not elliptic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct MinimalRun {
  RationalExpr expr;
  Realization built;
  Realization minimal;
};

MinimalRun minimal_realization(const std::string& text, const RunConfig& cfg) {
  MinimalRun m;
  m.expr = parse_expr(text, cfg);
  const auto center = center_of(m.expr, cfg);
  m.built = build(m.expr, center);
  m.minimal = minimize(m.built);
  return m;
}

// Shared by regular and stably-bounded.
CommandResult realization_verdict(const std::string& text, const RunConfig& cfg, bool stably) {
  CommandResult r;
  MinimalRun m = minimal_realization(text, cfg);
  PencilRun run = classify_checked(m.minimal.pencil, cfg);
  r.report["expression"] = format(m.expr.root);
  r.report["field"] = to_string(m.expr.field);
  r.report["center"] = m.minimal.center;
  r.report["built_size"] = m.built.size();
  r.report["minimal_size"] = m.minimal.size();
  r.report["pencil_verdict"] = to_string(run.cert.verdict);
  std::string answer;
  if (run.cert.verdict == Verdict::Inconclusive) {
    r.exit_code = kExitInconclusive;
    answer = "inconclusive";
  } else if (stably) {
    answer = run.cert.verdict == Verdict::StablyElliptic ? "yes" : "no";
  } else {
    answer = run.cert.verdict == Verdict::NotElliptic ? "no" : "yes";
  }
  r.report[stably ? "stably_bounded" : "regular"] = answer;
  r.report["certificate"] = io::to_json(run.cert, m.expr.field);
  if (!run.cert.message.empty()) r.report["message"] = run.cert.message;

  std::ostringstream os;
  os << (stably ? "stably bounded: " : "regular: ") << answer << " (" << verdict_phrase(run.cert.verdict) << ")\n";
  os << "minimal realization size: " << m.minimal.size() << " (built " << m.built.size() << ")\n";
  if (!run.cert.chain.empty()) {
    os << "chain:";
    for (const auto& s : run.cert.chain) {
      Index rank = 0;
      for (Index i = 0; i < s.eigs.size(); ++i) rank += s.eigs(i) > std::max(1e-6, cfg.tol) ? 1 : 0;
      os << " [rank Re(DA0) = " << rank << ", kernel " << s.V.cols() << "]";
    }
    os << "\n";
  }
  if (run.cert.epsilon) {
    os << "epsilon: " << fmt(*run.cert.epsilon) << " (L(X)*L(X) >= epsilon I on self-adjoint X)\n";
    r.report["epsilon"] = *run.cert.epsilon;
  }
  if (run.cert.witness) {
    // The witness Y is for the pencil at X - center.
    const MatrixPoint x = run.cert.witness->shifted(m.minimal.center);
    const bool outside = !eval_realization(m.minimal, x).has_value();
    r.report["witness_point"] = io::to_json(x);
    r.report["witness_outside_domain"] = outside;
    os << "singular point of size " << x.n << " found; realization " << (outside ? "singular" : "still invertible") << " there\n";
  }
  if (!run.cert.message.empty() && run.cert.verdict == Verdict::Inconclusive) os << "note: " << run.cert.message << "\n";
  r.text = os.str();
  r.certificate = r.report["certificate"];
  return r;
}

}  // namespace

std::string render(const CommandResult& r, const RunConfig& cfg) {
  if (cfg.json) return r.report.dump(2) + "\n";
  return r.text;
}

CommandResult cmd_parse(const std::string& expr, const RunConfig& cfg) {
  return guarded("parse", [&] {
    CommandResult r;
    const RationalExpr e = parse_expr(expr, cfg);
    const NodeCounts c = count_nodes(e.root);
    r.report["expression"] = format(e.root);
    r.report["field"] = to_string(e.field);
    r.report["nvars"] = e.nvars;
    r.report["tau"] = tau(e.root);
    r.report["constants"] = c.constants;
    r.report["symbols"] = c.symbols;
    r.report["inverses"] = c.inverses;
    r.report["subexpressions"] = subexpressions(e.root).size();
    std::ostringstream os;
    os << format(e.root) << "\n"
       << "tau = " << tau(e.root) << ", variables = " << e.nvars << ", |Q| = " << subexpressions(e.root).size() << "\n";
    r.text = os.str();
    return r;
  });
}

CommandResult cmd_eval(const std::string& expr, const std::string& point_path, bool mp, const RunConfig& cfg) {
  return guarded("eval", [&] {
    CommandResult r;
    const MatrixPoint x = io::point_from_json(io::read_json_file(point_path));
    RunConfig c2 = cfg;
    c2.field = x.field;
    const RationalExpr e = parse_expr(expr, c2, x.g());
    r.report["expression"] = format(e.root);
    r.report["mode"] = mp ? "moore_penrose" : "strict";
    if (mp) {
      const Mat v = eval_mp(e.root, x);
      r.report["value"] = io::to_json(v, x.field);
      r.text = io::to_json(v, x.field).dump() + "\n";
      return r;
    }
    EvalResult v = eval_strict(e.root, x);
    if (!v.defined()) {
      r.report["value"] = nullptr;
      r.report["undefined_at"] = format(v.failing);
      r.text = "undefined at " + format(v.failing) + "\n";
      return r;
    }
    r.report["value"] = io::to_json(*v.value, x.field);
    r.text = io::to_json(*v.value, x.field).dump() + "\n";
    return r;
  });
}

CommandResult cmd_realize(const std::string& expr, const RunConfig& cfg) {
  return guarded("realize", [&] {
    CommandResult r;
    const RationalExpr e = parse_expr(expr, cfg);
    const Realization re = build(e, center_of(e, cfg));
    r.report["size"] = re.size();
    r.report["realization"] = io::to_json(re);
    r.certificate = r.report["realization"];
    r.text = "realization of size " + std::to_string(re.size()) + "\n" + r.report["realization"].dump() + "\n";
    return r;
  });
}

CommandResult cmd_minimize(const std::string& expr, const RunConfig& cfg) {
  return guarded("minimize", [&] {
    CommandResult r;
    MinimalRun m = minimal_realization(expr, cfg);
    r.report["built_size"] = m.built.size();
    r.report["size"] = m.minimal.size();
    r.report["realization"] = io::to_json(m.minimal);
    r.certificate = r.report["realization"];
    r.text = "minimal realization of size " + std::to_string(m.minimal.size()) + " (built " +
             std::to_string(m.built.size()) + ")\n" + r.report["realization"].dump() + "\n";
    return r;
  });
}

CommandResult cmd_classify_pencil(const std::string& pencil_path, const RunConfig& cfg) {
  return guarded("classify-pencil", [&] {
    CommandResult r;
    const LinearPencil l = io::pencil_from_json(io::read_json_file(pencil_path));
    PencilRun run = classify_checked(l, cfg);
    r.report["verdict"] = to_string(run.cert.verdict);
    r.report["certificate"] = io::to_json(run.cert, l.field);
    r.report["verified"] = run.check.ok;
    r.report["sampling"] = sampling_summary(l, cfg);
    if (run.cert.verdict == Verdict::Inconclusive) r.exit_code = kExitInconclusive;
    std::ostringstream os;
    os << "verdict: " << verdict_phrase(run.cert.verdict) << "\n";
    os << "chain length: " << run.cert.chain.size() << (run.cert.transposed ? " (on L*)" : "") << "\n";
    if (run.cert.epsilon) os << "epsilon: " << fmt(*run.cert.epsilon) << "\n";
    if (run.cert.witness) os << "singular point of size " << run.cert.witness->n << "\n";
    os << "sampled min sigma: " << fmt(r.report["sampling"]["min_sigma"].get<double>()) << " over "
       << r.report["sampling"]["samples"].get<int>() << " self-adjoint points\n";
    if (!run.cert.message.empty()) os << "note: " << run.cert.message << "\n";
    r.text = os.str();
    r.certificate = r.report["certificate"];
    return r;
  });
}

CommandResult cmd_regular(const std::string& expr, const RunConfig& cfg) {
  return guarded("regular", [&] { return realization_verdict(expr, cfg, false); });
}

CommandResult cmd_stably_bounded(const std::string& expr, const RunConfig& cfg) {
  return guarded("stably-bounded", [&] { return realization_verdict(expr, cfg, true); });
}

CommandResult cmd_sohs(const std::string& expr, const RunConfig& cfg) {
  return guarded("sohs", [&] {
    CommandResult r;
    const RationalExpr e = parse_expr(expr, cfg);
    SohsOptions so;
    so.k = cfg.degree;
    so.seed = cfg.seed;
    so.max_size = cfg.max_size;
    so.samples_per_size = cfg.samples_per_size;
    r.report["expression"] = format(e.root);
    std::ostringstream os;
    if (auto cert = sohs_decompose(e, so)) {
      const Realization pe = positively_elliptic_realization(*cert, cfg.seed);
      r.report["sohs"] = "yes";
      r.report["certificate"] = io::to_json(*cert);
      r.report["positively_elliptic_realization"] = io::to_json(pe);
      r.certificate = r.report["certificate"];
      os << "sohs: yes (k = " << cert->k << ", basis " << cert->basis.size() << (cert->basis.truncated ? ", truncated" : "")
         << ", " << cert->squares.size() << " squares)\n";
      // Text view: squares from the eigenpairs of G, small coefficients pruned.
      linalg::HermitianEig eig = linalg::hermitian_eig(cert->G);
      int shown = 0;
      for (Index a = eig.eigenvalues.size() - 1; a >= 0 && shown < 8; --a, ++shown) {
        const double lam = eig.eigenvalues(a);
        if (lam < 1e-6 * eig.eigenvalues.maxCoeff()) break;
        const Vec h = eig.eigenvectors.col(a).conjugate();
        const double hmax = h.cwiseAbs().maxCoeff();
        os << "  weight " << fmt(lam) << ":";
        for (Index i = 0; i < h.size(); ++i) {
          if (std::abs(h(i)) < 1e-6 * hmax) continue;
          os << " " << (e.field == Field::Real ? fmt(h(i).real()) : "(" + fmt(h(i).real()) + "," + fmt(h(i).imag()) + ")")
             << "*" << format(cert->basis.elements[static_cast<std::size_t>(i)]);
        }
        os << "\n";
      }
      if (static_cast<std::size_t>(shown) < cert->squares.size())
        os << "  (" << cert->squares.size() - shown << " more squares of relative weight < 1e-6 in the JSON certificate)\n";
      os << "residual max " << fmt(cert->residual.max) << " over " << cert->residual.points << " points\n";
      os << "positively elliptic realization of size " << pe.size() << "\n";
      r.text = os.str();
      return r;
    }
    const int k = cfg.degree.value_or(2 * tau(e.root) + 1);
    auto x = mp_counterexample(e, k, 1e-8, cfg.seed);
    if (!x) {
      r.exit_code = kExitInconclusive;
      r.report["sohs"] = "inconclusive";
      r.text = "sohs: inconclusive (Gram SDP infeasible at k = " + std::to_string(k) + ", no counterexample extracted)\n";
      return r;
    }
    const Mat v = eval_mp(e.root, *x);
    const RVec ev = linalg::hermitian_eig(linalg::real_part(v)).eigenvalues;
    std::vector<double> spec(ev.data(), ev.data() + ev.size());
    r.report["sohs"] = "no";
    r.report["counterexample"] = io::to_json(*x);
    r.report["mp_spectrum"] = spec;
    r.certificate = r.report["counterexample"];
    os << "sohs: no (counterexample of size " << x->n << ", smallest mp eigenvalue " << fmt(ev(0)) << ")\n";
    r.text = os.str();
    return r;
  });
}

CommandResult cmd_strictly_positive(const std::string& expr, const RunConfig& cfg) {
  return guarded("strictly-positive", [&] {
    CommandResult r;
    const RationalExpr e = parse_expr(expr, cfg);
    const StrictPositivity sp = strictly_positive(e, cfg.tol, cfg.seed);
    r.report["expression"] = format(e.root);
    r.report["verdict"] = to_string(sp.outcome);
    r.report["value_at_zero"] = sp.value_at_zero;
    r.report["regular_verdict"] = to_string(sp.regular_verdict);
    r.report["inverse_verdict"] = to_string(sp.inverse_verdict);
    r.report["reason"] = sp.reason;
    if (sp.outcome == StrictPositivity::Outcome::Inconclusive) r.exit_code = kExitInconclusive;
    r.text = "strictly positive: " + to_string(sp.outcome) + " (" + sp.reason + ")\n";
    return r;
  });
}

CommandResult cmd_witness(const std::string& pencil_path, const RunConfig& cfg) {
  return guarded("witness", [&] {
    CommandResult r;
    const LinearPencil l = io::pencil_from_json(io::read_json_file(pencil_path));
    auto x = singular_witness(l, cfg.tol);
    if (!x) {
      r.exit_code = kExitInconclusive;
      r.report["witness"] = nullptr;
      r.text = "no singular point extracted\n";
      return r;
    }
    const double smin = linalg::min_singular_value(eval(l, *x));
    r.report["witness"] = io::to_json(*x);
    r.report["min_sigma"] = smin;
    r.certificate = r.report["witness"];
    r.text = "singular point of size " + std::to_string(x->n) + ", min sigma " + fmt(smin) + "\n" + r.report["witness"].dump() + "\n";
    return r;
  });
}

}  // namespace ncr
