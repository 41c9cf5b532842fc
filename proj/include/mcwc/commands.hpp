#pragma once

#include "mcwc/scene_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace mcwc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2 };

struct CommandResult {
  nlohmann::json report;
  int exit_code = kOk;
  /// Comma-separated table (header line first), written when --csv is given.
  std::string csv;
};

struct CommonOptions {
  bool parallel_shortcut = false;
};

CommandResult cmd_analyze(const io::Scene &scene, const CommonOptions &opts);

CommandResult cmd_check(const io::Scene &scene, const Vec3 &accel,
                        const std::optional<Vec3> &l_dot,
                        const CommonOptions &opts);

struct ShiftOptions {
  int samples = 1000;
  int reps = 25;
  std::uint64_t seed = 1;
};

CommandResult cmd_shift(const io::Scene &scene, const Vec3 &delta,
                        const ShiftOptions &shift_opts,
                        const CommonOptions &opts);

CommandResult cmd_scenario(const io::Scenario &scenario,
                           const CommonOptions &opts);

CommandResult cmd_bench(const io::Scene &scene, int reps, std::uint64_t seed,
                        const CommonOptions &opts);

/// Serialises a report; timing fields are the only non-deterministic part.
std::string dump(const nlohmann::json &report);

} // namespace mcwc::cli
