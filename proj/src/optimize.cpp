#include "switchopt/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace switchopt {

const char* to_string(IterationAction action) {
    switch (action) {
        case IterationAction::Descent: return "descent";
        case IterationAction::Insert: return "insert";
        case IterationAction::Remove: return "remove";
    }
    return "descent";
}

void OptimizerOptions::validate() const {
    if (max_iters < 1) throw Error(ErrorCode::BadParams, "max_iters must be positive");
    if (armijo_slope <= 0.0 || armijo_slope >= 1.0) {
        throw Error(ErrorCode::BadParams, "armijo_slope must lie in (0,1)");
    }
    if (backtrack <= 0.0 || backtrack >= 1.0) {
        throw Error(ErrorCode::BadParams, "backtrack must lie in (0,1)");
    }
    if (initial_step < 0.0) throw Error(ErrorCode::BadParams, "initial_step must be >= 0");
    if (kkt_tol <= 0.0) throw Error(ErrorCode::BadParams, "kkt_tol must be positive");
    if (insertion_threshold > 0.0) {
        throw Error(ErrorCode::BadParams, "insertion_threshold must be <= 0");
    }
    if (insertion_grid < 1) throw Error(ErrorCode::BadParams, "insertion_grid must be >= 1");
    if (max_insertions < 0) throw Error(ErrorCode::BadParams, "max_insertions must be >= 0");
}

SwitchingSchedule project_schedule(const std::vector<double>& raw, double horizon) {
    if (horizon <= 0.0) throw Error(ErrorCode::BadParams, "horizon must be positive");
    for (double v : raw) {
        if (!std::isfinite(v)) throw Error(ErrorCode::BadParams, "projection input not finite");
    }

    // Pool-adjacent-violators for unweighted isotonic regression.
    struct Pool {
        double sum;
        int count;
    };
    std::vector<Pool> pools;
    pools.reserve(raw.size());
    for (double v : raw) {
        Pool current{v, 1};
        while (!pools.empty() &&
               pools.back().sum * current.count >= current.sum * pools.back().count) {
            current.sum += pools.back().sum;
            current.count += pools.back().count;
            pools.pop_back();
        }
        pools.push_back(current);
    }

    std::vector<double> projected;
    projected.reserve(raw.size());
    for (const Pool& pool : pools) {
        const double level = std::clamp(pool.sum / pool.count, 0.0, horizon);
        for (int i = 0; i < pool.count; ++i) projected.push_back(level);
    }
    return validate_schedule(projected, horizon);
}

namespace {

IterationRecord make_record(int iteration, IterationAction action,
                            const SwitchingSchedule& schedule, const ModeSequence& modes,
                            double cost, double kkt, double step,
                            const std::vector<double>& gradient) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.action = action;
    rec.schedule = schedule.interior();
    rec.modes = modes.modes;
    rec.cost = cost;
    rec.kkt_residual = kkt;
    rec.step = step;
    rec.gradient = gradient;
    return rec;
}

struct DescentResult {
    SwitchingSchedule schedule;
    double cost = 0.0;
    double kkt = 0.0;
    bool converged = false;
    bool stalled = false;
};

DescentResult descend(const HybridSystemSpec& system, const ModeSequence& modes,
                      SwitchingSchedule schedule, const OptimizerOptions& options,
                      OptimizationTrace& trace, int& iteration) {
    const double horizon = schedule.horizon();
    const double step_floor = 1e-15 * horizon;

    DescentResult result;
    double cost = reduced_cost(system, modes, schedule, options.solve);
    double alpha_memory = 0.0;  // grows on clean accepts, shrinks with backtracking

    for (int iter = 0; iter < options.max_iters; ++iter) {
        const HybridTrajectory traj = solve_forward(system, modes, schedule, options.solve);
        const AdjointTrajectory adj = solve_adjoint(system, traj);
        const GradientReport report = switching_gradient(system, traj, adj, options.group_eps);
        const double grad_scale = std::max(1.0, report.max_abs());

        if (report.kkt.residual <= options.kkt_tol * grad_scale) {
            trace.iterations.push_back(make_record(iteration++, IterationAction::Descent,
                                                   schedule, modes, cost, report.kkt.residual,
                                                   0.0, report.gradient));
            result.converged = true;
            break;
        }

        Eigen::Map<const Eigen::VectorXd> grad(report.gradient.data(),
                                               static_cast<Eigen::Index>(report.gradient.size()));
        const double grad_norm = grad.norm();
        double alpha = options.initial_step > 0.0 ? options.initial_step
                                                  : horizon / (10.0 * std::max(1.0, grad_norm));
        alpha = std::max(alpha, alpha_memory);

        bool accepted = false;
        bool backtracked = false;
        SwitchingSchedule candidate;
        double candidate_cost = 0.0;
        while (alpha >= step_floor) {
            std::vector<double> moved = schedule.interior();
            for (std::size_t i = 0; i < moved.size(); ++i) moved[i] -= alpha * report.gradient[i];
            candidate = project_schedule(moved, horizon);

            double decrease = 0.0;
            for (std::size_t i = 0; i < moved.size(); ++i) {
                decrease += report.gradient[i] * (schedule.interior()[i] - candidate.interior()[i]);
            }
            if (decrease <= 0.0) {
                // Projection returned the current point (or an ascent move);
                // shrinking cannot help once the step produces no movement.
                if (candidate.interior() == schedule.interior()) break;
                alpha *= options.backtrack;
                backtracked = true;
                continue;
            }
            candidate_cost = reduced_cost(system, modes, candidate, options.solve);
            if (candidate_cost <= cost - options.armijo_slope * decrease) {
                accepted = true;
                break;
            }
            alpha *= options.backtrack;
            backtracked = true;
        }

        if (!accepted) {
            trace.iterations.push_back(make_record(iteration++, IterationAction::Descent,
                                                   schedule, modes, cost, report.kkt.residual,
                                                   0.0, report.gradient));
            result.stalled = true;
            break;
        }

        schedule = candidate;
        cost = candidate_cost;
        alpha_memory = std::min(backtracked ? alpha : alpha / options.backtrack, 1e6 * horizon);
        trace.iterations.push_back(make_record(iteration++, IterationAction::Descent, schedule,
                                               modes, cost, report.kkt.residual, alpha,
                                               report.gradient));
    }

    // Final stationarity measure at the point we stopped at.
    {
        const HybridTrajectory traj = solve_forward(system, modes, schedule, options.solve);
        const AdjointTrajectory adj = solve_adjoint(system, traj);
        const GradientReport report = switching_gradient(system, traj, adj, options.group_eps);
        result.kkt = report.kkt.residual;
        if (!result.converged && !result.stalled) {
            result.converged =
                report.kkt.residual <= options.kkt_tol * std::max(1.0, report.max_abs());
        }
    }
    result.schedule = schedule;
    result.cost = cost;
    return result;
}

}  // namespace

OptimizationTrace optimize_times(const HybridSystemSpec& system, const ModeSequence& modes,
                                 const SwitchingSchedule& schedule0,
                                 const OptimizerOptions& options) {
    options.validate();
    validate_problem(system, modes, schedule0);

    OptimizationTrace trace;
    int iteration = 0;
    DescentResult result = descend(system, modes, schedule0, options, trace, iteration);
    trace.final_modes = modes;
    trace.final_schedule = result.schedule;
    trace.final_cost = result.cost;
    trace.final_kkt = result.kkt;
    trace.converged = result.converged;
    trace.stalled = result.stalled;
    return trace;
}

namespace {

/// Prunes one degenerate interval whose removal does not increase the cost.
/// Removing interval n drops mode j_n and one of the coincident times; the
/// two transitions around it merge into g^{j_{n-1}, j_{n+1}}.
bool try_remove_degenerate(const HybridSystemSpec& system, ModeSequence& modes,
                           SwitchingSchedule& schedule, double& cost,
                           const OptimizerOptions& options) {
    const int n_switches = schedule.switch_count();
    if (n_switches == 0) return false;
    const double tol = 1e-12 * (1.0 + std::abs(cost));
    for (int n = 0; n <= n_switches; ++n) {
        if (schedule.time(n) != schedule.time(n + 1)) continue;  // interval n not degenerate

        const int before = (n >= 1) ? modes.at(n - 1) : -1;
        const int after = (n + 1 <= n_switches) ? modes.at(n + 1) : -1;
        if (before >= 0 && after >= 0 && !system.has_reset(before, after)) continue;

        ModeSequence reduced_modes;
        reduced_modes.modes = modes.modes;
        reduced_modes.modes.erase(reduced_modes.modes.begin() + n);
        // Interior indices: tau_m lives at slot m-1; drop tau_{n+1} when it is
        // interior, otherwise tau_n (trailing interval pinned at T).
        std::vector<double> reduced_times = schedule.interior();
        const int drop = (n < n_switches) ? n : n - 1;
        reduced_times.erase(reduced_times.begin() + drop);

        double reduced_cost_value = 0.0;
        SwitchingSchedule reduced_schedule;
        try {
            reduced_schedule = validate_schedule(reduced_times, schedule.horizon());
            reduced_cost_value =
                reduced_cost(system, reduced_modes, reduced_schedule, options.solve);
        } catch (const Error&) {
            continue;
        }
        if (reduced_cost_value <= cost + tol) {
            modes = reduced_modes;
            schedule = reduced_schedule;
            cost = reduced_cost_value;
            return true;
        }
    }
    return false;
}

}  // namespace

OptimizationTrace optimize_sequence(const HybridSystemSpec& system, const ModeSequence& modes0,
                                    const SwitchingSchedule& schedule0,
                                    const OptimizerOptions& options) {
    options.validate();
    validate_problem(system, modes0, schedule0);

    OptimizationTrace trace;
    int iteration = 0;
    ModeSequence modes = modes0;
    SwitchingSchedule schedule = schedule0;
    double cost = reduced_cost(system, modes, schedule, options.solve);
    bool converged = false;
    bool stalled = false;
    double kkt = 0.0;

    for (int round = 0; round <= options.max_insertions; ++round) {
        DescentResult result = descend(system, modes, schedule, options, trace, iteration);
        schedule = result.schedule;
        cost = result.cost;
        kkt = result.kkt;
        converged = result.converged;
        stalled = result.stalled;

        while (try_remove_degenerate(system, modes, schedule, cost, options)) {
            trace.iterations.push_back(make_record(iteration++, IterationAction::Remove, schedule,
                                                   modes, cost, kkt, 0.0, {}));
        }

        if (round == options.max_insertions) break;

        const double threshold = options.insertion_threshold < 0.0
                                     ? options.insertion_threshold
                                     : -1e-3 * (1.0 + std::abs(cost));

        std::vector<double> grid;
        grid.reserve(static_cast<std::size_t>(options.insertion_grid));
        for (int i = 1; i <= options.insertion_grid; ++i) {
            grid.push_back(schedule.horizon() * i / (options.insertion_grid + 1));
        }
        std::vector<int> candidates;
        for (int j = 0; j < system.mode_count(); ++j) candidates.push_back(j);

        const InsertionScan scan =
            insertion_scan(system, modes, schedule, grid, candidates, options.solve);
        const InsertionEntry* best = scan.best();
        if (best == nullptr || !(best->gradient < threshold)) break;

        const InsertionExpansion exp =
            build_insertion_expansion(modes, schedule, best->time, best->candidate);
        modes = exp.modes;
        schedule = validate_schedule(exp.interior, schedule.horizon());
        cost = reduced_cost(system, modes, schedule, options.solve);
        trace.iterations.push_back(
            make_record(iteration++, IterationAction::Insert, schedule, modes, cost, kkt, 0.0, {}));
    }

    trace.final_modes = modes;
    trace.final_schedule = schedule;
    trace.final_cost = cost;
    trace.final_kkt = kkt;
    trace.converged = converged;
    trace.stalled = stalled;
    return trace;
}

}  // namespace switchopt
