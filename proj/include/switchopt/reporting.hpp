#pragma once

/**
 * @file reporting.hpp
 * @brief Delimited-text tables and key-value reports for CLI output. Every
 *        report echoes the mesh and tolerance parameters that produced it.
 */

#include "switchopt/config.hpp"
#include "switchopt/gradients.hpp"
#include "switchopt/optimize.hpp"

#include <string>

namespace switchopt {

/// Full-precision decimal formatting (round-trips doubles exactly).
[[nodiscard]] std::string format_full(double v);

/** @brief Parameters echoed into every report. */
struct RunMeta {
    double h_max = 0.0;
    double fd_step = 0.0;
    double kkt_tol = 0.0;
    long seed = 0;
};

[[nodiscard]] std::string trajectory_table(const HybridTrajectory& traj);

[[nodiscard]] std::string cost_report(const CostBreakdown& breakdown,
                                      const HybridTrajectory& traj, const RunMeta& meta);

[[nodiscard]] std::string gradient_report_text(const GradientReport& report,
                                               const SwitchingSchedule& schedule,
                                               const RunMeta& meta);

/** @brief One row of the gradient cross-check table. */
struct CheckGradRow {
    int k = 0;
    double adjoint = 0.0;
    double variational = 0.0;
    FdGradient fd;
    bool pass_variational = false;
    bool pass_fd = false;
};

[[nodiscard]] std::string check_grad_table(const std::vector<CheckGradRow>& rows,
                                           double rel_tol_variational, double rel_tol_fd,
                                           double abs_floor, const RunMeta& meta);

[[nodiscard]] std::string insertion_scan_table(const InsertionScan& scan, const RunMeta& meta);

[[nodiscard]] std::string optimize_trace_table(const OptimizationTrace& trace,
                                               const RunMeta& meta);

[[nodiscard]] std::string final_summary(const OptimizationTrace& trace, const RunMeta& meta);

[[nodiscard]] std::string error_report(const Error& error);

/// Writes content to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace switchopt
