#pragma once

#include "lobeq_cli/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lobeq::cli {

/// Solver residuals above this fail the run.
inline constexpr double kResidualTolerance = 1e-12;

enum ExitCode : int { kOk = 0, kConfigError = 1, kResidualFailure = 2, kRuntimeError = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::filesystem::path> outputs;
  double worst_residual = 0.0;
};

CommandResult cmd_shape(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_spread(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_signature(const RunConfig& cfg, const std::filesystem::path& out);
CommandResult cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out);

/// Parses `doc` for `command`, applies the seed override, runs the command
/// and writes manifest.json into `out`. Errors are logged, not thrown.
int run_command(const std::string& command, json doc, const std::filesystem::path& out,
                std::optional<std::uint64_t> seed_override = std::nullopt);

/// 17 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

}  // namespace lobeq::cli
