#include <fstream>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>

#include "ncr/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regularity, stable boundedness and positivity of nc rational functions"};
  app.require_subcommand(1);

  ncr::RunConfig cfg;
  std::string field = "r";
  int threads = 0;
  std::optional<int> degree;
  app.add_option("--field", field, "ground field: r or c")->check(CLI::IsMember({"r", "c", "R", "C"}));
  app.add_option("--tol", cfg.tol, "tolerance")->check(CLI::Range(1e-15, 1e-2));
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--degree", degree, "SOHS degree k (default 2 tau + 1)")->check(CLI::Range(0, 64));
  app.add_option("--max-size", cfg.max_size, "largest sampled matrix size")->check(CLI::Range(1, 64));
  app.add_flag("--json", cfg.json, "print the report as JSON");
  app.add_option("--threads", threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out, "write the certificate JSON here");

  std::string expr, path;
  bool mp = false;
  auto add_expr = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("expr", expr, "expression")->required();
    return sub;
  };
  add_expr("parse", "parse and print an expression");
  auto* ev = add_expr("eval", "evaluate at a point");
  ev->add_option("point", path, "point JSON file")->required()->check(CLI::ExistingFile);
  ev->add_flag("--mp", mp, "Moore-Penrose evaluation");
  add_expr("realize", "build a realization");
  add_expr("minimize", "build and minimize a realization");
  auto* cp = app.add_subcommand("classify-pencil", "classify a pencil from JSON");
  cp->add_option("pencil", path, "pencil JSON file")->required()->check(CLI::ExistingFile);
  add_expr("regular", "decide regularity");
  add_expr("stably-bounded", "decide stable boundedness");
  add_expr("sohs", "sum of hermitian squares certificate");
  add_expr("strictly-positive", "strict positivity test");
  auto* wi = app.add_subcommand("witness", "singular self-adjoint point of a pencil");
  wi->add_option("pencil", path, "pencil JSON file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ncr::kExitInput;
  }
  cfg.field = (field == "c" || field == "C") ? ncr::Field::Complex : ncr::Field::Real;
  cfg.degree = degree;
  if (threads > 0) omp_set_num_threads(threads);

  const std::string cmd = app.get_subcommands().front()->get_name();
  ncr::CommandResult r;
  if (cmd == "parse") r = ncr::cmd_parse(expr, cfg);
  else if (cmd == "eval") r = ncr::cmd_eval(expr, path, mp, cfg);
  else if (cmd == "realize") r = ncr::cmd_realize(expr, cfg);
  else if (cmd == "minimize") r = ncr::cmd_minimize(expr, cfg);
  else if (cmd == "classify-pencil") r = ncr::cmd_classify_pencil(path, cfg);
  else if (cmd == "regular") r = ncr::cmd_regular(expr, cfg);
  else if (cmd == "stably-bounded") r = ncr::cmd_stably_bounded(expr, cfg);
  else if (cmd == "sohs") r = ncr::cmd_sohs(expr, cfg);
  else if (cmd == "strictly-positive") r = ncr::cmd_strictly_positive(expr, cfg);
  else if (cmd == "witness") r = ncr::cmd_witness(path, cfg);

  const bool error = r.exit_code == ncr::kExitInput || r.exit_code == ncr::kExitNoCenter;
  if (error) std::cerr << r.text;
  if (!error || cfg.json) std::cout << ncr::render(r, cfg);
  if (!cfg.out.empty() && r.certificate) {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return ncr::kExitInput;
    }
    out << r.certificate->dump(2) << "\n";
  }
  return r.exit_code;
}
