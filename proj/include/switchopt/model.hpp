#pragma once

/**
 * @file model.hpp
 * @brief Problem-definition types: modes, resets, costs, the hybrid system
 *        spec, switching schedules and mode sequences, plus schedule
 *        validation, coincidence grouping and the reset chain-property check.
 *
 * All types are immutable once built; every operation is a pure function of
 * its inputs and safe to run concurrently on a shared const system spec.
 */

#include "switchopt/registry.hpp"
#include "switchopt/types.hpp"

#include <map>
#include <utility>
#include <vector>

namespace switchopt {

/// Stepper families. The splitting stepper propagates the generator with a
/// precomputed dense matrix exponential and handles the nonlinearity at the
/// midpoint; it is the one to use for stiff generators (diffusion, delay
/// chains with fast rates).
enum class StepperKind {
    RungeKutta4,
    ExponentialSplitting,
};

[[nodiscard]] const char* to_string(StepperKind kind);
[[nodiscard]] StepperKind stepper_kind_from_string(const std::string& name);

/** @brief One dynamic mode: generator matrix plus registered nonlinearity. */
struct ModeSpec {
    Matrix generator;           ///< A, n x n, units 1/time
    Nonlinearity nonlinearity;  ///< f(t, z)
    StepperKind stepper = StepperKind::RungeKutta4;
};

/** @brief Cost data: running l(t,z), switching l^{i,j}(t,z), terminal phi(z). */
struct CostSpec {
    QuadraticCost running;
    std::map<std::pair<int, int>, QuadraticCost> switching;
    QuadraticCost terminal;  ///< time fields unused; evaluated at z(T)

    /// Missing table entries mean zero switching cost.
    [[nodiscard]] const QuadraticCost& switching_cost(int from, int to) const;
};

/**
 * @brief The full problem datum: mode table, reset table, cost, horizon and
 *        initial state.
 */
struct HybridSystemSpec {
    int state_dim = 0;
    std::vector<ModeSpec> modes;
    std::map<std::pair<int, int>, ResetMap> resets;
    CostSpec cost;
    double horizon = 0.0;
    Vector initial_state;

    /// Reset for an ordered pair; the diagonal is implicitly the identity.
    /// Throws MissingReset for an absent off-diagonal pair.
    [[nodiscard]] const ResetMap& reset(int from, int to) const;
    [[nodiscard]] bool has_reset(int from, int to) const;

    [[nodiscard]] int mode_count() const { return static_cast<int>(modes.size()); }

    /// Dimension/positivity checks; throws BadParams on violation.
    void validate() const;
};

/**
 * @brief Validated monotone switching-time vector with implied endpoints
 *        tau_0 = 0 and tau_{N+1} = T.
 */
class SwitchingSchedule {
  public:
    SwitchingSchedule() = default;

    [[nodiscard]] int switch_count() const { return static_cast<int>(interior_.size()); }

    /// tau_k for k = 0..N+1 (0 and T at the ends).
    [[nodiscard]] double time(int k) const;

    [[nodiscard]] const std::vector<double>& interior() const { return interior_; }
    [[nodiscard]] double horizon() const { return horizon_; }

    friend SwitchingSchedule validate_schedule(const std::vector<double>& raw, double horizon);

  private:
    SwitchingSchedule(std::vector<double> interior, double horizon)
        : interior_(std::move(interior)), horizon_(horizon) {}

    std::vector<double> interior_;
    double horizon_ = 0.0;
};

[[nodiscard]] bool operator==(const SwitchingSchedule& a, const SwitchingSchedule& b);

/**
 * @brief Checks 0 <= tau_1 <= ... <= tau_N <= T exactly and wraps the vector.
 *
 * Throws MonotonicityViolation (message names the first offending 1-based
 * index) or OutOfHorizon. Never mutates its input.
 */
[[nodiscard]] SwitchingSchedule validate_schedule(const std::vector<double>& raw, double horizon);

/** @brief Mode sequence (j_0, ..., j_N) paired with an N-switch schedule. */
struct ModeSequence {
    std::vector<int> modes;

    [[nodiscard]] int size() const { return static_cast<int>(modes.size()); }
    [[nodiscard]] int at(int n) const { return modes.at(static_cast<std::size_t>(n)); }
};

/// Consistency of (system, modes, schedule): lengths and mode ids.
void validate_problem(const HybridSystemSpec& system, const ModeSequence& modes,
                      const SwitchingSchedule& schedule);

/**
 * @brief Coincidence groups a(tau,k), b(tau,k) for k = 1..N.
 *
 * Groups are maximal runs of indices over 0..N+1 (endpoints included) whose
 * consecutive times differ by at most eps; a is the first index of k's run,
 * b the last.
 */
struct CoincidenceGroups {
    std::vector<int> lower;  ///< a(tau,k), entry k-1, values in 0..N+1
    std::vector<int> upper;  ///< b(tau,k), entry k-1, values in 0..N+1

    [[nodiscard]] int a(int k) const { return lower.at(static_cast<std::size_t>(k - 1)); }
    [[nodiscard]] int b(int k) const { return upper.at(static_cast<std::size_t>(k - 1)); }
};

[[nodiscard]] CoincidenceGroups coincidence_groups(const SwitchingSchedule& schedule, double eps);

/// Default coincidence tolerance, 1e-9 * T.
[[nodiscard]] double default_group_eps(double horizon);

/** @brief Result of the (B1) chain-property check g^{i,j} = g^{k,j} ∘ g^{i,k}. */
struct ChainPropertyReport {
    double max_defect = 0.0;
    bool pass = false;
    double tolerance = 0.0;
};

/**
 * @brief Max over samples of |g^{i,j}(z) - g^{k,j}(g^{i,k}(z))| against tol.
 *
 * Throws MissingReset if any of the three transitions is absent.
 */
[[nodiscard]] ChainPropertyReport check_chain_property(const HybridSystemSpec& system, int i,
                                                       int k, int j,
                                                       const std::vector<Vector>& samples,
                                                       double tolerance);

}  // namespace switchopt
