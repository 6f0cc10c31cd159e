#pragma once

/**
 * @file optimize.hpp
 * @brief Projected gradient descent over admissible switching times (Armijo
 *        backtracking, pool-adjacent-violators projection) and an insertion
 *        outer loop over mode sequences.
 */

#include "switchopt/gradients.hpp"

namespace switchopt {

struct OptimizerOptions {
    int max_iters = 100;
    double armijo_slope = 1e-4;      ///< sigma in (0,1)
    double backtrack = 0.5;          ///< beta in (0,1)
    double initial_step = 0.0;       ///< 0 -> T / (10 * max(1, |g|))
    double kkt_tol = 1e-6;           ///< convergence: residual <= tol * max(1, |g|_inf)
    double insertion_threshold = 0.0;  ///< 0 -> -1e-3 * (1 + |Phi|); must be <= 0
    int insertion_grid = 9;
    int max_insertions = 5;
    double group_eps = -1.0;  ///< < 0 -> 1e-9 * T
    SolveOptions solve;

    void validate() const;
};

enum class IterationAction { Descent, Insert, Remove };

[[nodiscard]] const char* to_string(IterationAction action);

struct IterationRecord {
    int iteration = 0;
    IterationAction action = IterationAction::Descent;
    std::vector<double> schedule;  ///< interior times after the action
    std::vector<int> modes;
    double cost = 0.0;
    double kkt_residual = 0.0;
    double step = 0.0;  ///< accepted step length (descent only)
    std::vector<double> gradient;
};

struct OptimizationTrace {
    std::vector<IterationRecord> iterations;
    ModeSequence final_modes;
    SwitchingSchedule final_schedule;
    double final_cost = 0.0;
    double final_kkt = 0.0;
    bool converged = false;
    bool stalled = false;  ///< line search found no acceptable step
};

/**
 * @brief Euclidean projection onto {0 <= tau_1 <= ... <= tau_N <= T}:
 *        pool-adjacent-violators followed by clamping to [0, T].
 */
[[nodiscard]] SwitchingSchedule project_schedule(const std::vector<double>& raw, double horizon);

/**
 * @brief Projected gradient descent tau <- P(tau - alpha g) with Armijo
 *        acceptance Phi(new) <= Phi(old) - sigma * g . (tau_old - tau_new).
 *
 * Terminates when the grouped KKT residual drops below tolerance or on
 * max_iters; a stalled line search is reported in the trace, not thrown.
 */
[[nodiscard]] OptimizationTrace optimize_times(const HybridSystemSpec& system,
                                               const ModeSequence& modes,
                                               const SwitchingSchedule& schedule0,
                                               const OptimizerOptions& options = {});

/**
 * @brief Alternates optimize_times with insertion scans: a candidate whose
 *        insertion gradient beats the threshold enters as a coincident pair;
 *        zero-length segments whose removal does not increase the cost are
 *        pruned. Stops when no candidate beats the threshold.
 */
[[nodiscard]] OptimizationTrace optimize_sequence(const HybridSystemSpec& system,
                                                  const ModeSequence& modes0,
                                                  const SwitchingSchedule& schedule0,
                                                  const OptimizerOptions& options = {});

}  // namespace switchopt
