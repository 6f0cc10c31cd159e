#include "switchopt/forward.hpp"

#include "switchopt/stepper.hpp"

#include <algorithm>
#include <cmath>

namespace switchopt {

StepControl resolve_options(const SolveOptions& options, const HybridSystemSpec& system) {
    StepControl control;
    control.h_max = options.h_max > 0.0 ? options.h_max : system.horizon / 1000.0;
    control.blowup_limit = options.blowup_limit > 0.0
                               ? options.blowup_limit
                               : 1e12 * (1.0 + system.initial_state.norm());
    return control;
}

Vector DenseSegment::eval(double t) const {
    if (degenerate()) return values.front();
    const int m = step_count();
    const double h = (t_end - t_start) / m;
    int idx = static_cast<int>(std::floor((t - t_start) / h));
    idx = std::clamp(idx, 0, m - 1);
    const double h_loc = knots[static_cast<std::size_t>(idx) + 1] - knots[static_cast<std::size_t>(idx)];
    const double theta = (t - knots[static_cast<std::size_t>(idx)]) / h_loc;
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * values[static_cast<std::size_t>(idx)] +
           (h10 * h_loc) * derivatives[static_cast<std::size_t>(idx)] +
           h01 * values[static_cast<std::size_t>(idx) + 1] +
           (h11 * h_loc) * derivatives[static_cast<std::size_t>(idx) + 1];
}

DenseSegment step_segment(const ModeSpec& mode, const Vector& z_init, double t_start, double t_end,
                          const StepControl& control, int interval, int mode_index) {
    if (t_end < t_start) {
        throw Error(ErrorCode::BadParams, "segment end precedes segment start");
    }
    if (control.h_max <= 0.0) {
        throw Error(ErrorCode::BadParams, "h_max must be positive");
    }
    const Nonlinearity& f = mode.nonlinearity;
    return detail::integrate_semilinear(
        mode.generator, [&](double t, const Vector& z) { return f.value(t, z); }, mode.stepper,
        z_init, t_start, t_end, control, interval, mode_index);
}

const Vector& HybridTrajectory::left_limit(int n) const {
    if (n < 1 || n > switch_count() + 1) {
        throw Error(ErrorCode::OutOfDomain, "left limit index out of range");
    }
    return left_limits[static_cast<std::size_t>(n - 1)];
}

const Vector& HybridTrajectory::right_value(int n) const {
    if (n < 0 || n > switch_count()) {
        throw Error(ErrorCode::OutOfDomain, "right value index out of range");
    }
    return right_values[static_cast<std::size_t>(n)];
}

const Vector& HybridTrajectory::state_at_horizon() const { return left_limits.back(); }

const DenseSegment* HybridTrajectory::segment_for_interval(int n) const {
    const int slot = segment_of_interval.at(static_cast<std::size_t>(n));
    return slot < 0 ? nullptr : &segments[static_cast<std::size_t>(slot)];
}

HybridTrajectory solve_forward(const HybridSystemSpec& system, const ModeSequence& modes,
                               const SwitchingSchedule& schedule, const SolveOptions& options) {
    validate_problem(system, modes, schedule);
    const int n_switches = schedule.switch_count();

    HybridTrajectory traj;
    traj.schedule = schedule;
    traj.modes = modes;
    traj.control = resolve_options(options, system);
    traj.segment_of_interval.assign(static_cast<std::size_t>(n_switches) + 1, -1);
    traj.right_values.reserve(static_cast<std::size_t>(n_switches) + 1);
    traj.left_limits.reserve(static_cast<std::size_t>(n_switches) + 1);

    Vector z = system.initial_state;
    traj.right_values.push_back(z);

    for (int n = 0; n <= n_switches; ++n) {
        const double t0 = schedule.time(n);
        const double t1 = schedule.time(n + 1);
        if (t1 > t0) {
            DenseSegment seg = step_segment(system.modes[static_cast<std::size_t>(modes.at(n))], z,
                                            t0, t1, traj.control, n, modes.at(n));
            z = seg.values.back();
            traj.segment_of_interval[static_cast<std::size_t>(n)] =
                static_cast<int>(traj.segments.size());
            traj.segments.push_back(std::move(seg));
        }
        traj.left_limits.push_back(z);  // z^-(tau_{n+1}) = z^n(tau_{n+1})
        if (n < n_switches) {
            z = system.reset(modes.at(n), modes.at(n + 1)).apply(z);
            traj.right_values.push_back(z);
        }
    }
    return traj;
}

Vector eval_trajectory(const HybridTrajectory& traj, double t, Side side) {
    const SwitchingSchedule& schedule = traj.schedule;
    const int n_switches = schedule.switch_count();
    if (t < 0.0 || t > schedule.horizon()) {
        throw Error(ErrorCode::OutOfDomain,
                    "evaluation time " + std::to_string(t) + " outside [0, T]");
    }

    // Exact hit on a switching time (or an endpoint): serve the stored
    // one-sided values; runs of coincident times act as one event.
    int first_hit = -1;
    int last_hit = -1;
    for (int k = 0; k <= n_switches + 1; ++k) {
        if (schedule.time(k) == t) {
            if (first_hit < 0) first_hit = k;
            last_hit = k;
        }
    }
    if (first_hit >= 0) {
        if (side == Side::Left) {
            return first_hit == 0 ? traj.right_value(0) : traj.left_limit(first_hit);
        }
        return last_hit == n_switches + 1 ? traj.state_at_horizon() : traj.right_value(last_hit);
    }

    // Strictly inside an interval: tau_n < t < tau_{n+1}.
    int interval = 0;
    for (int k = n_switches; k >= 0; --k) {
        if (schedule.time(k) < t) {
            interval = k;
            break;
        }
    }
    const DenseSegment* seg = traj.segment_for_interval(interval);
    if (seg == nullptr) {
        throw Error(ErrorCode::OutOfDomain, "no segment covers t = " + std::to_string(t));
    }
    return seg->eval(t);
}

double integrate_samples(const std::vector<double>& knots, const std::vector<double>& samples) {
    const int m = static_cast<int>(knots.size()) - 1;
    if (m < 1) return 0.0;
    const int paired = (m % 2 == 0) ? m : m - 1;
    double sum = 0.0;
    for (int i = 0; i + 2 <= paired; i += 2) {
        const double h = knots[static_cast<std::size_t>(i) + 1] - knots[static_cast<std::size_t>(i)];
        sum += (h / 3.0) * (samples[static_cast<std::size_t>(i)] +
                            4.0 * samples[static_cast<std::size_t>(i) + 1] +
                            samples[static_cast<std::size_t>(i) + 2]);
    }
    if (paired != m) {
        const double h = knots.back() - knots[static_cast<std::size_t>(m - 1)];
        sum += 0.5 * h * (samples[static_cast<std::size_t>(m - 1)] + samples.back());
    }
    return sum;
}

CostBreakdown cost_breakdown(const HybridSystemSpec& system, const HybridTrajectory& traj) {
    CostBreakdown out;

    const QuadraticCost& l = system.cost.running;
    if (!l.is_zero()) {
        for (const DenseSegment& seg : traj.segments) {
            std::vector<double> samples(seg.knots.size());
            for (std::size_t i = 0; i < seg.knots.size(); ++i) {
                samples[i] = l.value(seg.knots[i], seg.values[i]);
            }
            out.running += integrate_samples(seg.knots, samples);
        }
    }

    const int n_switches = traj.switch_count();
    out.switching.reserve(static_cast<std::size_t>(n_switches));
    for (int n = 1; n <= n_switches; ++n) {
        const QuadraticCost& lc =
            system.cost.switching_cost(traj.modes.at(n - 1), traj.modes.at(n));
        out.switching.push_back(lc.value(traj.schedule.time(n), traj.left_limit(n)));
    }

    if (!system.cost.terminal.is_zero()) {
        out.terminal = system.cost.terminal.value(0.0, traj.state_at_horizon());
    }
    return out;
}

double CostBreakdown::total() const {
    double sum = running + terminal;
    for (double s : switching) sum += s;
    return sum;
}

double evaluate_cost(const HybridSystemSpec& system, const HybridTrajectory& traj) {
    return cost_breakdown(system, traj).total();
}

double reduced_cost(const HybridSystemSpec& system, const ModeSequence& modes,
                    const SwitchingSchedule& schedule, const SolveOptions& options) {
    return evaluate_cost(system, solve_forward(system, modes, schedule, options));
}

}  // namespace switchopt
