#pragma once

/**
 * @file forward.hpp
 * @brief Forward integration of the hybrid evolution: dense piecewise-smooth
 *        trajectories with one-sided values at every switching time, reset
 *        maps applied analytically between segments, and cost evaluation on
 *        the stepper mesh.
 */

#include "switchopt/model.hpp"
#include "switchopt/types.hpp"

#include <vector>

namespace switchopt {

/** @brief Mesh/robustness options; zero fields resolve to system defaults. */
struct SolveOptions {
    double h_max = 0.0;         ///< 0 -> horizon / 1000
    double blowup_limit = 0.0;  ///< 0 -> 1e12 * (1 + |z0|)
};

/** @brief Fully resolved stepping parameters. */
struct StepControl {
    double h_max = 0.0;
    double blowup_limit = 0.0;
};

[[nodiscard]] StepControl resolve_options(const SolveOptions& options,
                                          const HybridSystemSpec& system);

/**
 * @brief Dense solution on one inter-switch interval.
 *
 * Knots are equally spaced; values and time-derivatives at the knots feed a
 * cubic Hermite interpolant. A degenerate segment (zero-length interval)
 * holds a single knot.
 */
struct DenseSegment {
    int interval = 0;  ///< index n of the owning interval [tau_n, tau_{n+1}]
    int mode = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> knots;
    std::vector<Vector> values;
    std::vector<Vector> derivatives;

    [[nodiscard]] bool degenerate() const { return knots.size() <= 1; }
    [[nodiscard]] int step_count() const { return static_cast<int>(knots.size()) - 1; }

    /// Cubic Hermite interpolation; t is clamped to [t_start, t_end].
    [[nodiscard]] Vector eval(double t) const;
};

/**
 * @brief Integrates dz/dt = A z + f(t,z) over [t_start, t_end] with the
 *        mode's stepper, fixed step count ceil((t_end-t_start)/h_max).
 *
 * Throws BlowUp when the state norm exceeds control.blowup_limit and
 * NonFiniteState on NaN/Inf.
 */
[[nodiscard]] DenseSegment step_segment(const ModeSpec& mode, const Vector& z_init, double t_start,
                                        double t_end, const StepControl& control,
                                        int interval = 0, int mode_index = 0);

/**
 * @brief Piecewise dense forward solution with stored one-sided values.
 *
 * Per-index conventions follow the segment decomposition: left_limit(n) is
 * the end value of segment n-1 (the value the n-th reset is applied to) and
 * right_value(n) the value after the n-th reset, so coincident switching
 * times chain resets without integration in between.
 */
struct HybridTrajectory {
    SwitchingSchedule schedule;
    ModeSequence modes;
    std::vector<DenseSegment> segments;    ///< non-degenerate intervals, ascending
    std::vector<int> segment_of_interval;  ///< size N+1, -1 for degenerate intervals
    std::vector<Vector> left_limits;       ///< entry n-1 holds z^-(tau_n), n = 1..N+1
    std::vector<Vector> right_values;      ///< entry n holds z(tau_n), n = 0..N
    StepControl control;                   ///< resolved mesh shared by adjoint/variational passes

    [[nodiscard]] int switch_count() const { return schedule.switch_count(); }
    [[nodiscard]] double horizon() const { return schedule.horizon(); }

    [[nodiscard]] const Vector& left_limit(int n) const;   ///< n in 1..N+1
    [[nodiscard]] const Vector& right_value(int n) const;  ///< n in 0..N

    /// z(T); equals left_limit(N+1) under the right-continuity convention.
    [[nodiscard]] const Vector& state_at_horizon() const;

    [[nodiscard]] const DenseSegment* segment_for_interval(int n) const;
};

/**
 * @brief Solves the hybrid evolution over [0, T].
 *
 * Coincident switching times compose resets in sequence order with no
 * integration between them; resets themselves are applied analytically.
 */
[[nodiscard]] HybridTrajectory solve_forward(const HybridSystemSpec& system,
                                             const ModeSequence& modes,
                                             const SwitchingSchedule& schedule,
                                             const SolveOptions& options = {});

enum class Side { Left, Right };

/**
 * @brief Dense evaluation; at switching times the side selects z^-(tau_n)
 *        (before all coincident resets) or z(tau_n) (after all of them).
 *        Interior points ignore the side. Throws OutOfDomain outside [0, T].
 */
[[nodiscard]] Vector eval_trajectory(const HybridTrajectory& traj, double t, Side side);

/** @brief Cost pieces of eq-style J = integral + switching sum + terminal. */
struct CostBreakdown {
    double running = 0.0;
    std::vector<double> switching;  ///< one entry per switch n = 1..N
    double terminal = 0.0;

    [[nodiscard]] double total() const;
};

/// Running integral by composite Simpson on each segment's knots (trapezoid
/// fallback on an odd interval count), switching costs at stored left limits,
/// terminal cost at z(T).
[[nodiscard]] CostBreakdown cost_breakdown(const HybridSystemSpec& system,
                                           const HybridTrajectory& traj);

[[nodiscard]] double evaluate_cost(const HybridSystemSpec& system, const HybridTrajectory& traj);

/// Reduced cost: forward solve followed by evaluate_cost.
[[nodiscard]] double reduced_cost(const HybridSystemSpec& system, const ModeSequence& modes,
                                  const SwitchingSchedule& schedule,
                                  const SolveOptions& options = {});

/// Composite Simpson on equally spaced samples; trapezoid on a trailing odd
/// interval. Returns 0 for fewer than two samples.
[[nodiscard]] double integrate_samples(const std::vector<double>& knots,
                                       const std::vector<double>& samples);

}  // namespace switchopt
