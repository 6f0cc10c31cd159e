#pragma once

/**
 * @file config.hpp
 * @brief Flat sectioned key-value run configuration: parsing, emission and
 *        resolution into a validated problem instance.
 *
 * Format: `[section]` headers followed by single-line `key values...`
 * entries; matrices and vectors are row-major number lists with the shape
 * declared inline (`generator 2 2  0.1 1 -1 0.1`). Unknown keys are rejected
 * with the offending line number. `#` starts a comment.
 */

#include "switchopt/optimize.hpp"
#include "switchopt/scenarios.hpp"

#include <optional>
#include <string>

namespace switchopt {

/** @brief Parsed run configuration; either a scenario or an inline system. */
struct RunConfig {
    int schema = 1;
    std::optional<ScenarioParams> scenario;
    std::optional<HybridSystemSpec> inline_system;
    std::optional<std::vector<int>> sequence;          ///< overrides scenario default
    std::optional<std::vector<double>> schedule_times; ///< overrides scenario default
    OptimizerOptions optimizer;
    double fd_step = 0.0;  ///< 0 -> 1e-5 * T
    long seed = 0;
    std::vector<int> candidates;    ///< insertion candidates; empty -> all modes
    std::vector<double> scan_grid;  ///< explicit insertion grid; empty -> uniform
};

/// Parses configuration text; throws ConfigError naming key and line.
[[nodiscard]] RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file.
[[nodiscard]] RunConfig parse_config_file(const std::string& path);

/// Emits a configuration round-trippable through parse_config.
[[nodiscard]] std::string emit_config(const RunConfig& config);

/** @brief Config resolved into a solvable problem. */
struct ResolvedRun {
    HybridSystemSpec system;
    ModeSequence modes;
    SwitchingSchedule schedule;
    SolveOptions solve;
};

/// Builds the system (scenario or inline), applies sequence/schedule
/// overrides and validates the result.
[[nodiscard]] ResolvedRun resolve_run(const RunConfig& config);

}  // namespace switchopt
