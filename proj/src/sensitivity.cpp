#include "switchopt/sensitivity.hpp"

#include "switchopt/stepper.hpp"

#include <algorithm>
#include <cmath>

namespace switchopt {

namespace {

Vector mode_velocity(const HybridSystemSpec& system, int mode_index, double t, const Vector& z) {
    const ModeSpec& mode = system.modes[static_cast<std::size_t>(mode_index)];
    return mode.generator * z + mode.nonlinearity.value(t, z);
}

}  // namespace

const Vector& VariationalTrajectory::value_at(int n) const {
    if (n < k || n >= static_cast<int>(right_values.size())) {
        throw Error(ErrorCode::OutOfDomain, "variational value index out of range");
    }
    return right_values[static_cast<std::size_t>(n)];
}

const Vector& VariationalTrajectory::limit_at(int n) const {
    if (n < k + 1 || n >= static_cast<int>(left_limits.size())) {
        throw Error(ErrorCode::OutOfDomain, "variational limit index out of range");
    }
    return left_limits[static_cast<std::size_t>(n)];
}

const Vector& VariationalTrajectory::at_horizon() const { return left_limits.back(); }

const DenseSegment* VariationalTrajectory::segment_for_interval(int n) const {
    const int slot = segment_of_interval.at(static_cast<std::size_t>(n));
    return slot < 0 ? nullptr : &segments[static_cast<std::size_t>(slot)];
}

Vector left_velocity(const HybridSystemSpec& system, const HybridTrajectory& traj, int k) {
    const double tau = traj.schedule.time(k);
    return mode_velocity(system, traj.modes.at(k - 1), tau, traj.left_limit(k));
}

Vector seed_variation(const HybridSystemSpec& system, const HybridTrajectory& traj, int k) {
    const int n_switches = traj.switch_count();
    if (k < 1 || k > n_switches) {
        throw Error(ErrorCode::OutOfDomain, "switch index " + std::to_string(k) +
                                                " outside 1.." + std::to_string(n_switches));
    }
    const double tau = traj.schedule.time(k);
    const Vector& z_minus = traj.left_limit(k);
    const Vector& z_plus = traj.right_value(k);
    const ResetMap& reset = system.reset(traj.modes.at(k - 1), traj.modes.at(k));

    Vector before = left_velocity(system, traj, k);
    if (!reset.is_identity()) before = reset.jacobian(z_minus) * before;
    return before - mode_velocity(system, traj.modes.at(k), tau, z_plus);
}

VariationalTrajectory solve_variational(const HybridSystemSpec& system,
                                        const HybridTrajectory& traj, int k) {
    const int n_switches = traj.switch_count();
    const SwitchingSchedule& schedule = traj.schedule;

    VariationalTrajectory var;
    var.k = k;
    var.schedule = schedule;
    var.control = traj.control;
    var.segment_of_interval.assign(static_cast<std::size_t>(n_switches) + 1, -1);
    var.right_values.assign(static_cast<std::size_t>(n_switches) + 1, Vector());
    var.left_limits.assign(static_cast<std::size_t>(n_switches) + 2, Vector());

    Vector v = seed_variation(system, traj, k);
    var.right_values[static_cast<std::size_t>(k)] = v;

    for (int n = k; n <= n_switches; ++n) {
        const double t0 = schedule.time(n);
        const double t1 = schedule.time(n + 1);
        if (t1 > t0) {
            const ModeSpec& mode = system.modes[static_cast<std::size_t>(traj.modes.at(n))];
            const DenseSegment* state_seg = traj.segment_for_interval(n);
            auto z_at = [&](double t) -> Vector {
                if (t <= t0) return traj.right_value(n);
                if (t >= t1) return traj.left_limit(n + 1);
                return state_seg->eval(t);
            };
            auto linearized = [&](double t, const Vector& w) -> Vector {
                return mode.nonlinearity.jacobian(t, z_at(t)) * w;
            };
            DenseSegment seg =
                detail::integrate_semilinear(mode.generator, linearized, mode.stepper, v, t0, t1,
                                             traj.control, n, traj.modes.at(n));
            v = seg.values.back();
            var.segment_of_interval[static_cast<std::size_t>(n)] =
                static_cast<int>(var.segments.size());
            var.segments.push_back(std::move(seg));
        }
        var.left_limits[static_cast<std::size_t>(n + 1)] = v;
        if (n < n_switches) {
            const ResetMap& reset = system.reset(traj.modes.at(n), traj.modes.at(n + 1));
            if (!reset.is_identity()) v = reset.jacobian(traj.left_limit(n + 1)) * v;
            var.right_values[static_cast<std::size_t>(n + 1)] = v;
        }
    }
    return var;
}

namespace {

double shifted_cost(const HybridSystemSpec& system, const ModeSequence& modes,
                    const SwitchingSchedule& schedule, int k, double delta,
                    const SolveOptions& options) {
    std::vector<double> interior = schedule.interior();
    double value = interior[static_cast<std::size_t>(k - 1)] + delta;
    // Clamp roundoff that would nudge the time past its neighbours.
    const double lo = (k >= 2) ? interior[static_cast<std::size_t>(k - 2)] : 0.0;
    const double hi = (k < static_cast<int>(interior.size())) ? interior[static_cast<std::size_t>(k)]
                                                              : schedule.horizon();
    interior[static_cast<std::size_t>(k - 1)] = std::clamp(value, lo, hi);
    return reduced_cost(system, modes, validate_schedule(interior, schedule.horizon()), options);
}

}  // namespace

FdGradient fd_gradient(const HybridSystemSpec& system, const ModeSequence& modes,
                       const SwitchingSchedule& schedule, int k, double step,
                       const SolveOptions& options) {
    const int n_switches = schedule.switch_count();
    if (k < 1 || k > n_switches) {
        throw Error(ErrorCode::OutOfDomain, "switch index out of range");
    }
    const double horizon = schedule.horizon();
    const double h_default = step > 0.0 ? step : 1e-5 * horizon;
    const double tiny = 1e-12 * horizon;

    const double room_left = schedule.time(k) - schedule.time(k - 1);
    const double room_right = schedule.time(k + 1) - schedule.time(k);

    FdGradient fd;
    if (room_left <= tiny && room_right <= tiny) {
        throw Error(ErrorCode::BadParams,
                    "switch " + std::to_string(k) + " is pinned on both sides; no admissible "
                                                    "finite-difference direction");
    }

    auto one_sided = [&](double h, double sign) {
        const double base = reduced_cost(system, modes, schedule, options);
        return sign * (shifted_cost(system, modes, schedule, k, sign * h, options) - base) / h;
    };
    auto central = [&](double h) {
        return (shifted_cost(system, modes, schedule, k, h, options) -
                shifted_cost(system, modes, schedule, k, -h, options)) /
               (2.0 * h);
    };

    if (room_left <= tiny) {
        fd.kind = FdKind::Forward;
        fd.h = std::min(h_default, room_right);
        fd.clipped = fd.h < h_default;
        fd.value = one_sided(fd.h, +1.0);
        fd.value_refined = one_sided(0.5 * fd.h, +1.0);
    } else if (room_right <= tiny) {
        fd.kind = FdKind::Backward;
        fd.h = std::min(h_default, room_left);
        fd.clipped = fd.h < h_default;
        fd.value = one_sided(fd.h, -1.0);
        fd.value_refined = one_sided(0.5 * fd.h, -1.0);
    } else {
        fd.kind = FdKind::Central;
        fd.h = std::min({h_default, room_left, room_right});
        fd.clipped = fd.h < h_default;
        fd.value = central(fd.h);
        fd.value_refined = central(0.5 * fd.h);
    }
    return fd;
}

}  // namespace switchopt
