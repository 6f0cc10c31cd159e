#pragma once

/**
 * @file gradients.hpp
 * @brief Switching-time gradient from one adjoint solve, the variational-path
 *        gradient, grouped first-order (KKT) conditions for coincident
 *        switching times, and the mode-insertion gradient.
 */

#include "switchopt/adjoint.hpp"
#include "switchopt/sensitivity.hpp"

#include <array>
#include <string>

namespace switchopt {

enum class GradientMethod { Adjoint, Variational, FiniteDifference };

[[nodiscard]] const char* to_string(GradientMethod method);

/** @brief Grouped first-order conditions over coincident switching times. */
struct KktReport {
    CoincidenceGroups groups;
    std::vector<double> lower_sums;  ///< sum_{j=a(tau,k)..k} g_j (interior part)
    std::vector<double> upper_sums;  ///< sum_{j=k..b(tau,k)} g_j (interior part)
    std::vector<double> lower_multipliers;  ///< estimates of lambda^{a(tau,k)}
    std::vector<double> upper_multipliers;  ///< estimates of lambda^{b(tau,k)}
    double residual = 0.0;
    double eps = 0.0;
};

/**
 * @brief Residual of the grouped conditions: sum_{a..k} g <= 0 and
 *        sum_{k..b} g >= 0 for every k. A group pinned at tau_0 = 0 drops the
 *        first condition, a group pinned at T the second. Zero iff all hold.
 */
[[nodiscard]] KktReport kkt_residual(const std::vector<double>& gradient,
                                     const SwitchingSchedule& schedule, double eps);

/** @brief Per-switch gradient values plus grouped sums and KKT residual. */
struct GradientReport {
    std::vector<double> gradient;  ///< g_k for k = 1..N
    KktReport kkt;
    GradientMethod method = GradientMethod::Adjoint;

    [[nodiscard]] int size() const { return static_cast<int>(gradient.size()); }
    [[nodiscard]] double max_abs() const;
};

/**
 * @brief All N gradient components from one forward + one backward solve:
 *        g_k = l(tau_k, z^-) - l(tau_k, z(tau_k)) + l^{i,j}_tau(tau_k, z^-)
 *              + <l^{i,j}_z(tau_k, z^-), dz^-/dt(tau_k)>
 *              - <p+(tau_k), z_k(tau_k)>
 *        with the variational seed z_k(tau_k) from seed_variation.
 *
 * eps < 0 selects the default coincidence tolerance 1e-9 * T.
 */
[[nodiscard]] GradientReport switching_gradient(const HybridSystemSpec& system,
                                                const HybridTrajectory& traj,
                                                const AdjointTrajectory& adj, double eps = -1.0);

/**
 * @brief Same gradient component through the forward sensitivity path:
 *        running-cost integral against z_k, later switching-cost terms and
 *        the terminal pairing, all on the shared mesh.
 */
[[nodiscard]] double variational_gradient(const HybridSystemSpec& system,
                                          const HybridTrajectory& traj, int k,
                                          const VariationalTrajectory& var);

/// Convenience: full report via repeated variational solves (validation use).
[[nodiscard]] GradientReport variational_gradient_report(const HybridSystemSpec& system,
                                                         const HybridTrajectory& traj,
                                                         double eps = -1.0);

/// Convenience: full report via central finite differences (validation use).
[[nodiscard]] GradientReport fd_gradient_report(const HybridSystemSpec& system,
                                                const ModeSequence& modes,
                                                const SwitchingSchedule& schedule,
                                                double step = 0.0,
                                                const SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Mode insertion
// ---------------------------------------------------------------------------

/**
 * @brief Expanded problem for inserting mode jhat with vanishing dwell at
 *        time t. At an existing switch tau_k the new mode slips between
 *        j_{k-1} and j_k; at an interior time the owning interval is split
 *        into a coincident pair whose transitions must compose to the
 *        identity. `inserted_switch` indexes the switch that closes the
 *        sliver; its switching-time gradient is the insertion gradient.
 */
struct InsertionExpansion {
    ModeSequence modes;
    std::vector<double> interior;
    int inserted_switch = 0;
    int sliver_interval = 0;
    std::array<int, 3> chain_triple{};  ///< (i, mid, j) for the (B1) check
    std::pair<int, int> entry_pair{};   ///< transition into jhat
    std::pair<int, int> exit_pair{};    ///< transition out of jhat
};

[[nodiscard]] InsertionExpansion build_insertion_expansion(const ModeSequence& modes,
                                                           const SwitchingSchedule& schedule,
                                                           double t, int jhat);

/**
 * @brief Mode-insertion gradient at time t: one-sided derivative of the
 *        expanded reduced cost with respect to the sliver's closing time,
 *        evaluated at zero dwell. Negative values indicate that inserting
 *        jhat lowers the cost.
 *
 * Throws MissingReset when a required transition is absent and
 * ChainPropertyViolation when the (B1) composition check fails on trajectory
 * states.
 */
[[nodiscard]] double insertion_gradient_at(const HybridSystemSpec& system,
                                           const ModeSequence& modes,
                                           const SwitchingSchedule& schedule, double t, int jhat,
                                           const SolveOptions& options = {},
                                           double chain_tolerance = 1e-8);

/// Positional form: k in 1..N inserts at the existing switch tau_k; k = 0
/// inserts at t = 0.
[[nodiscard]] double insertion_gradient(const HybridSystemSpec& system, const ModeSequence& modes,
                                        const SwitchingSchedule& schedule, int k, int jhat,
                                        const SolveOptions& options = {},
                                        double chain_tolerance = 1e-8);

/**
 * @brief One-sided difference quotient of the expanded cost against the
 *        original cost over the sliver length h; the oracle the insertion
 *        gradient is validated against.
 */
[[nodiscard]] double insertion_fd(const HybridSystemSpec& system, const ModeSequence& modes,
                                  const SwitchingSchedule& schedule, double t, int jhat, double h,
                                  const SolveOptions& options = {});

struct InsertionEntry {
    double time = 0.0;
    int candidate = 0;
    double gradient = 0.0;
    bool feasible = false;
    std::string reason;  ///< empty when feasible
};

/** @brief Grid scan of insertion gradients, sorted ascending by value. */
struct InsertionScan {
    std::vector<InsertionEntry> entries;

    /// Best (most negative) feasible entry, or nullptr.
    [[nodiscard]] const InsertionEntry* best() const;
};

/// Evaluates insertion_gradient_at over the grid; infeasible pairs (missing
/// resets, chain violations, no room at the horizon) are flagged, not
/// dropped.
[[nodiscard]] InsertionScan insertion_scan(const HybridSystemSpec& system,
                                           const ModeSequence& modes,
                                           const SwitchingSchedule& schedule,
                                           const std::vector<double>& grid,
                                           const std::vector<int>& candidates,
                                           const SolveOptions& options = {},
                                           double chain_tolerance = 1e-8);

}  // namespace switchopt
