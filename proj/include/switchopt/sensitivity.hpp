#pragma once

/**
 * @file sensitivity.hpp
 * @brief Independent gradient oracles: the forward variational (sensitivity)
 *        solve and central finite differences of the reduced cost. These
 *        exist to validate the adjoint gradient; production gradients use the
 *        adjoint path.
 */

#include "switchopt/forward.hpp"

namespace switchopt {

/** @brief Dense solution of the linearized system seeded at switch k. */
struct VariationalTrajectory {
    int k = 0;  ///< seeded switch index, 1..N
    SwitchingSchedule schedule;
    std::vector<DenseSegment> segments;    ///< intervals k..N, non-degenerate only
    std::vector<int> segment_of_interval;  ///< size N+1, -1 where absent
    std::vector<Vector> right_values;      ///< z_k(tau_n) after the jump, defined for n >= k
    std::vector<Vector> left_limits;       ///< z_k^-(tau_n), defined for n >= k+1
    StepControl control;

    [[nodiscard]] const Vector& value_at(int n) const;  ///< n in k..N
    [[nodiscard]] const Vector& limit_at(int n) const;  ///< n in k+1..N+1
    [[nodiscard]] const Vector& at_horizon() const;     ///< z_k(T)
    [[nodiscard]] const DenseSegment* segment_for_interval(int n) const;
};

/**
 * @brief Initial value of the variational system at tau_k:
 *        g_z(z^-)(A^{j_{k-1}} z^- + f^{j_{k-1}}) - (A^{j_k} z + f^{j_k})
 *        using the stored one-sided values.
 */
[[nodiscard]] Vector seed_variation(const HybridSystemSpec& system, const HybridTrajectory& traj,
                                    int k);

/// Time derivative of the trajectory just before switch k (endpoint velocity
/// of segment k-1), A^{j_{k-1}} z^-(tau_k) + f^{j_{k-1}}(tau_k, z^-(tau_k)).
[[nodiscard]] Vector left_velocity(const HybridSystemSpec& system, const HybridTrajectory& traj,
                                   int k);

/**
 * @brief Integrates dz_k/dt = A z_k + f_z(t, z(t)) z_k forward from the seed,
 *        applying Jacobian jumps at later switches; shares the forward mesh.
 */
[[nodiscard]] VariationalTrajectory solve_variational(const HybridSystemSpec& system,
                                                      const HybridTrajectory& traj, int k);

enum class FdKind { Central, Forward, Backward };

/** @brief Finite-difference derivative of the reduced cost with Richardson refinement. */
struct FdGradient {
    double value = 0.0;          ///< estimate at step h
    double value_refined = 0.0;  ///< estimate at step h/2
    double h = 0.0;
    FdKind kind = FdKind::Central;
    bool clipped = false;

    /// Richardson guard: disagreement beyond 10x the stated tolerance marks
    /// the oracle unreliable for this instance.
    [[nodiscard]] bool reliable(double tolerance) const {
        return std::abs(value - value_refined) <=
               10.0 * tolerance * std::max(1.0, std::abs(value));
    }
};

/**
 * @brief (Phi(tau + h e_k) - Phi(tau - h e_k)) / (2h) by full forward solves.
 *
 * One-sided at active constraints (consistent with the one-sided derivative
 * convention); h is clipped to the available room and the clip recorded.
 * step <= 0 selects the default 1e-5 * T.
 */
[[nodiscard]] FdGradient fd_gradient(const HybridSystemSpec& system, const ModeSequence& modes,
                                     const SwitchingSchedule& schedule, int k, double step = 0.0,
                                     const SolveOptions& options = {});

}  // namespace switchopt
