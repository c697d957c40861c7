#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ncr/json_io.hpp"

namespace ncr {

struct RunConfig {
  Field field = Field::Real;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  std::optional<int> degree;
  Index max_size = 6;
  int samples_per_size = 40;
  int attempts = 64;  // scalar-center search budget
  bool json = false;
  std::string out;    // certificate path, empty for none
};

enum ExitCode { kExitOk = 0, kExitInput = 2, kExitNoCenter = 3, kExitInconclusive = 4 };

struct CommandResult {
  int exit_code = kExitOk;
  io::Json report;    // machine-readable report
  std::string text;   // human-readable report
  std::optional<io::Json> certificate;  // written to RunConfig::out when set
};

CommandResult cmd_parse(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_eval(const std::string& expr, const std::string& point_path, bool mp, const RunConfig& cfg);
CommandResult cmd_realize(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_minimize(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_classify_pencil(const std::string& pencil_path, const RunConfig& cfg);
CommandResult cmd_regular(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_stably_bounded(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_sohs(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_strictly_positive(const std::string& expr, const RunConfig& cfg);
CommandResult cmd_witness(const std::string& pencil_path, const RunConfig& cfg);

/// The report as printed: JSON (deterministic) or text.
std::string render(const CommandResult& r, const RunConfig& cfg);

}  // namespace ncr
