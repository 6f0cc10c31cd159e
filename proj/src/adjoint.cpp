#include "switchopt/adjoint.hpp"

#include "switchopt/stepper.hpp"

#include <algorithm>

namespace switchopt {

namespace {

/// State reader for one interval: one-sided stored values at the interval's
/// ends, Hermite interpolation inside.
class IntervalStateReader {
  public:
    IntervalStateReader(const HybridTrajectory& traj, int interval)
        : traj_(traj),
          interval_(interval),
          t_start_(traj.schedule.time(interval)),
          t_end_(traj.schedule.time(interval + 1)),
          segment_(traj.segment_for_interval(interval)) {}

    [[nodiscard]] Vector operator()(double t) const {
        if (t <= t_start_) return traj_.right_value(interval_);
        if (t >= t_end_) return traj_.left_limit(interval_ + 1);
        return segment_->eval(t);
    }

  private:
    const HybridTrajectory& traj_;
    int interval_;
    double t_start_;
    double t_end_;
    const DenseSegment* segment_;
};

}  // namespace

const Vector& AdjointTrajectory::right_limit(int n) const {
    if (n < 1 || n > switch_count()) {
        throw Error(ErrorCode::OutOfDomain, "adjoint right limit index out of range");
    }
    return right_limits[static_cast<std::size_t>(n - 1)];
}

const Vector& AdjointTrajectory::left_value(int n) const {
    if (n < 1 || n > switch_count() + 1) {
        throw Error(ErrorCode::OutOfDomain, "adjoint left value index out of range");
    }
    return left_values[static_cast<std::size_t>(n - 1)];
}

const DenseSegment* AdjointTrajectory::segment_for_interval(int n) const {
    const int slot = segment_of_interval.at(static_cast<std::size_t>(n));
    return slot < 0 ? nullptr : &segments[static_cast<std::size_t>(slot)];
}

AdjointTrajectory solve_adjoint(const HybridSystemSpec& system, const HybridTrajectory& traj) {
    const int n_switches = traj.switch_count();
    const SwitchingSchedule& schedule = traj.schedule;

    AdjointTrajectory adj;
    adj.schedule = schedule;
    adj.control = traj.control;
    adj.segment_of_interval.assign(static_cast<std::size_t>(n_switches) + 1, -1);
    adj.right_limits.assign(static_cast<std::size_t>(n_switches), Vector());
    adj.left_values.assign(static_cast<std::size_t>(n_switches) + 1, Vector());

    // Terminal condition under the eq:sysadj sign convention.
    Vector p = Vector::Zero(system.state_dim);
    if (!system.cost.terminal.is_zero()) {
        p = -system.cost.terminal.grad_z(traj.state_at_horizon());
    }
    adj.left_values[static_cast<std::size_t>(n_switches)] = p;  // p(tau_{N+1}) = p(T)

    std::vector<DenseSegment> reversed;  // collected backward, reversed at the end
    for (int n = n_switches; n >= 0; --n) {
        const double t0 = schedule.time(n);
        const double t1 = schedule.time(n + 1);
        if (t1 > t0) {
            const ModeSpec& mode = system.modes[static_cast<std::size_t>(traj.modes.at(n))];
            const IntervalStateReader z_at(traj, n);
            const QuadraticCost& l = system.cost.running;

            // Time reversal u(s) = p(t1 - s) turns the backward problem into a
            // forward semilinear one with generator A'.
            Matrix adj_generator = mode.generator.transpose();
            auto reversed_rhs = [&](double s, const Vector& u) -> Vector {
                const double t = t1 - s;
                const Vector z = z_at(t);
                Vector out = mode.nonlinearity.jacobian(t, z).transpose() * u;
                if (!l.is_zero()) out -= l.grad_z(z);
                return out;
            };
            DenseSegment back = detail::integrate_semilinear(adj_generator, reversed_rhs,
                                                             mode.stepper, p, 0.0, t1 - t0,
                                                             traj.control, n, traj.modes.at(n));
            p = back.values.back();

            // Store with ascending time; dp/dt = -du/ds.
            DenseSegment seg;
            seg.interval = n;
            seg.mode = traj.modes.at(n);
            seg.t_start = t0;
            seg.t_end = t1;
            const std::size_t count = back.knots.size();
            seg.knots.resize(count);
            seg.values.resize(count);
            seg.derivatives.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t j = count - 1 - i;
                seg.knots[i] = (i == 0) ? t0 : ((i + 1 == count) ? t1 : t1 - back.knots[j]);
                seg.values[i] = back.values[j];
                seg.derivatives[i] = -back.derivatives[j];
            }
            adj.segment_of_interval[static_cast<std::size_t>(n)] =
                static_cast<int>(reversed.size());
            reversed.push_back(std::move(seg));
        }

        if (n >= 1) {
            adj.right_limits[static_cast<std::size_t>(n - 1)] = p;  // p+(tau_n)
            const Vector& z_minus = traj.left_limit(n);
            const ResetMap& reset = system.reset(traj.modes.at(n - 1), traj.modes.at(n));
            Vector jumped = reset.jacobian(z_minus).transpose() * p;
            const QuadraticCost& lc =
                system.cost.switching_cost(traj.modes.at(n - 1), traj.modes.at(n));
            if (!lc.is_zero()) jumped -= lc.grad_z(z_minus);
            p = std::move(jumped);
            adj.left_values[static_cast<std::size_t>(n - 1)] = p;  // p(tau_n)
        }
    }
    adj.initial_value = p;

    adj.segments = std::move(reversed);
    // Segments were collected from the last interval down; restore ascending
    // order and refresh the slot table.
    std::reverse(adj.segments.begin(), adj.segments.end());
    for (std::size_t i = 0; i < adj.segments.size(); ++i) {
        adj.segment_of_interval[static_cast<std::size_t>(adj.segments[i].interval)] =
            static_cast<int>(i);
    }
    return adj;
}

}  // namespace switchopt
