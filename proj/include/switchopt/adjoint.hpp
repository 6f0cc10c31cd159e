#pragma once

/**
 * @file adjoint.hpp
 * @brief Backward adjoint solve aligned with a forward trajectory: same mesh,
 *        same stepper family per mode, adjoint jumps at switching times.
 *
 * Sign conventions: dp/dt = -A' p - f_z' p + l_z on each interval,
 * p(tau_n) = g_z' p+(tau_n) - l^{i,j}_z at switches, and p(T) = -phi_z(z(T)).
 * With these, the switching-time gradient carries -<p+(tau_k), z_k(tau_k)>
 * and matches central finite differences of the reduced cost.
 */

#include "switchopt/forward.hpp"

namespace switchopt {

/** @brief Piecewise dense backward solution with one-sided values. */
struct AdjointTrajectory {
    SwitchingSchedule schedule;
    std::vector<DenseSegment> segments;    ///< stored with ascending knots
    std::vector<int> segment_of_interval;  ///< size N+1, -1 for degenerate intervals
    std::vector<Vector> right_limits;      ///< entry n-1 holds p+(tau_n), n = 1..N
    std::vector<Vector> left_values;       ///< entry n-1 holds p(tau_n), n = 1..N+1
    Vector initial_value;                  ///< p(0)
    StepControl control;

    [[nodiscard]] int switch_count() const { return schedule.switch_count(); }

    [[nodiscard]] const Vector& right_limit(int n) const;  ///< n in 1..N
    [[nodiscard]] const Vector& left_value(int n) const;   ///< n in 1..N+1

    /// p(T) = -phi_z(z(T)); zero when there is no terminal cost.
    [[nodiscard]] const Vector& terminal_value() const { return left_values.back(); }

    [[nodiscard]] const DenseSegment* segment_for_interval(int n) const;
};

/**
 * @brief Integrates the adjoint system backward along the given trajectory.
 *
 * The forward state is read through the trajectory's dense interpolant with
 * the side matching the interval; coincident switching times compose adjoint
 * jumps in reverse sequence order without integration.
 */
[[nodiscard]] AdjointTrajectory solve_adjoint(const HybridSystemSpec& system,
                                              const HybridTrajectory& traj);

}  // namespace switchopt
