#include "switchopt/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace switchopt {

const char* to_string(GradientMethod method) {
    switch (method) {
        case GradientMethod::Adjoint: return "adjoint";
        case GradientMethod::Variational: return "variational";
        case GradientMethod::FiniteDifference: return "finite-difference";
    }
    return "adjoint";
}

double GradientReport::max_abs() const {
    double m = 0.0;
    for (double g : gradient) m = std::max(m, std::abs(g));
    return m;
}

KktReport kkt_residual(const std::vector<double>& gradient, const SwitchingSchedule& schedule,
                       double eps) {
    const int n_switches = schedule.switch_count();
    if (static_cast<int>(gradient.size()) != n_switches) {
        throw Error(ErrorCode::ScheduleMismatch, "gradient length does not match schedule");
    }
    KktReport report;
    report.eps = eps >= 0.0 ? eps : default_group_eps(schedule.horizon());
    report.groups = coincidence_groups(schedule, report.eps);
    report.lower_sums.resize(static_cast<std::size_t>(n_switches));
    report.upper_sums.resize(static_cast<std::size_t>(n_switches));
    report.lower_multipliers.resize(static_cast<std::size_t>(n_switches));
    report.upper_multipliers.resize(static_cast<std::size_t>(n_switches));

    for (int k = 1; k <= n_switches; ++k) {
        const int a = report.groups.a(k);
        const int b = report.groups.b(k);
        double lower = 0.0;
        for (int j = std::max(a, 1); j <= k; ++j) lower += gradient[static_cast<std::size_t>(j - 1)];
        double upper = 0.0;
        for (int j = k; j <= std::min(b, n_switches); ++j) {
            upper += gradient[static_cast<std::size_t>(j - 1)];
        }
        report.lower_sums[static_cast<std::size_t>(k - 1)] = lower;
        report.upper_sums[static_cast<std::size_t>(k - 1)] = upper;
        report.lower_multipliers[static_cast<std::size_t>(k - 1)] = -lower;
        report.upper_multipliers[static_cast<std::size_t>(k - 1)] = upper;

        double violation = 0.0;
        if (a >= 1) violation += std::max(lower, 0.0);   // group not pinned at tau_0
        if (b <= n_switches) violation += std::max(-upper, 0.0);  // not pinned at T
        report.residual = std::max(report.residual, violation);
    }
    return report;
}

namespace {

/// Shared l-terms of the gradient formula at switch k: the running-cost
/// mismatch across the reset, the explicit time partial of the switching
/// cost, and the motion of its evaluation point z^-(tau_k).
double explicit_terms(const HybridSystemSpec& system, const HybridTrajectory& traj, int k) {
    const double tau = traj.schedule.time(k);
    const Vector& z_minus = traj.left_limit(k);
    const Vector& z_plus = traj.right_value(k);
    const QuadraticCost& l = system.cost.running;

    double value = 0.0;
    if (!l.is_zero()) value += l.value(tau, z_minus) - l.value(tau, z_plus);
    const QuadraticCost& lc = system.cost.switching_cost(traj.modes.at(k - 1), traj.modes.at(k));
    if (!lc.is_zero()) {
        value += lc.dt();
        value += lc.grad_z(z_minus).dot(left_velocity(system, traj, k));
    }
    return value;
}

void require_alignment(const HybridTrajectory& traj, const AdjointTrajectory& adj) {
    if (!(traj.schedule == adj.schedule) || traj.control.h_max != adj.control.h_max) {
        throw Error(ErrorCode::ScheduleMismatch,
                    "forward and adjoint trajectories use different schedules or meshes");
    }
}

}  // namespace

GradientReport switching_gradient(const HybridSystemSpec& system, const HybridTrajectory& traj,
                                  const AdjointTrajectory& adj, double eps) {
    require_alignment(traj, adj);
    const int n_switches = traj.switch_count();

    GradientReport report;
    report.method = GradientMethod::Adjoint;
    report.gradient.resize(static_cast<std::size_t>(n_switches));
    for (int k = 1; k <= n_switches; ++k) {
        const Vector seed = seed_variation(system, traj, k);
        report.gradient[static_cast<std::size_t>(k - 1)] =
            explicit_terms(system, traj, k) - adj.right_limit(k).dot(seed);
    }
    report.kkt = kkt_residual(report.gradient, traj.schedule, eps);
    return report;
}

double variational_gradient(const HybridSystemSpec& system, const HybridTrajectory& traj, int k,
                            const VariationalTrajectory& var) {
    if (var.k != k || !(var.schedule == traj.schedule)) {
        throw Error(ErrorCode::ScheduleMismatch, "variational trajectory does not match index");
    }
    const int n_switches = traj.switch_count();
    double value = explicit_terms(system, traj, k);

    // Running-cost pairing integral on the shared mesh.
    const QuadraticCost& l = system.cost.running;
    if (!l.is_zero()) {
        for (int n = k; n <= n_switches; ++n) {
            const DenseSegment* zs = traj.segment_for_interval(n);
            const DenseSegment* vs = var.segment_for_interval(n);
            if (zs == nullptr || vs == nullptr) continue;
            std::vector<double> samples(zs->knots.size());
            for (std::size_t i = 0; i < zs->knots.size(); ++i) {
                samples[i] = l.grad_z(zs->values[i]).dot(vs->values[i]);
            }
            value += integrate_samples(zs->knots, samples);
        }
    }

    // Later switching costs through the state perturbation.
    for (int n = k + 1; n <= n_switches; ++n) {
        const QuadraticCost& lc =
            system.cost.switching_cost(traj.modes.at(n - 1), traj.modes.at(n));
        if (lc.is_zero()) continue;
        value += lc.grad_z(traj.left_limit(n)).dot(var.limit_at(n));
    }

    if (!system.cost.terminal.is_zero()) {
        value += system.cost.terminal.grad_z(traj.state_at_horizon()).dot(var.at_horizon());
    }
    return value;
}

GradientReport variational_gradient_report(const HybridSystemSpec& system,
                                           const HybridTrajectory& traj, double eps) {
    GradientReport report;
    report.method = GradientMethod::Variational;
    const int n_switches = traj.switch_count();
    report.gradient.resize(static_cast<std::size_t>(n_switches));
    for (int k = 1; k <= n_switches; ++k) {
        const VariationalTrajectory var = solve_variational(system, traj, k);
        report.gradient[static_cast<std::size_t>(k - 1)] =
            variational_gradient(system, traj, k, var);
    }
    report.kkt = kkt_residual(report.gradient, traj.schedule, eps);
    return report;
}

GradientReport fd_gradient_report(const HybridSystemSpec& system, const ModeSequence& modes,
                                  const SwitchingSchedule& schedule, double step,
                                  const SolveOptions& options) {
    GradientReport report;
    report.method = GradientMethod::FiniteDifference;
    const int n_switches = schedule.switch_count();
    report.gradient.resize(static_cast<std::size_t>(n_switches));
    for (int k = 1; k <= n_switches; ++k) {
        report.gradient[static_cast<std::size_t>(k - 1)] =
            fd_gradient(system, modes, schedule, k, step, options).value;
    }
    report.kkt = kkt_residual(report.gradient, schedule, -1.0);
    return report;
}

// ---------------------------------------------------------------------------
// Mode insertion
// ---------------------------------------------------------------------------

InsertionExpansion build_insertion_expansion(const ModeSequence& modes,
                                             const SwitchingSchedule& schedule, double t,
                                             int jhat) {
    const int n_switches = schedule.switch_count();
    const double horizon = schedule.horizon();
    if (t < 0.0 || t > horizon) {
        throw Error(ErrorCode::OutOfDomain, "insertion time outside [0, T]");
    }
    if (t >= horizon) {
        throw Error(ErrorCode::BadParams, "insertion at the horizon leaves no room for a dwell");
    }

    InsertionExpansion exp;
    exp.modes.modes = modes.modes;
    exp.interior = schedule.interior();

    // Exact hit on an interior switching time: insert between j_{k-1} and
    // j_k; a coincident run is entered at its first index.
    int at_switch = -1;
    for (int k = 1; k <= n_switches; ++k) {
        if (schedule.time(k) == t) {
            at_switch = k;
            break;
        }
    }

    if (at_switch >= 1) {
        const int k = at_switch;
        const int before = modes.at(k - 1);
        const int after = modes.at(k);
        exp.modes.modes.insert(exp.modes.modes.begin() + k, jhat);
        exp.interior.insert(exp.interior.begin() + k, t);
        exp.inserted_switch = k + 1;
        exp.sliver_interval = k;
        exp.chain_triple = {before, jhat, after};
        exp.entry_pair = {before, jhat};
        exp.exit_pair = {jhat, after};
        return exp;
    }

    // Interior of an interval (or t = 0): split into a coincident pair whose
    // transitions must compose to the identity.
    int interval = 0;
    for (int k = n_switches; k >= 0; --k) {
        if (schedule.time(k) <= t) {
            interval = k;
            break;
        }
    }
    const int ambient = modes.at(interval);
    exp.modes.modes.insert(exp.modes.modes.begin() + interval + 1, {jhat, ambient});
    exp.interior.insert(exp.interior.begin() + interval, {t, t});
    exp.inserted_switch = interval + 2;
    exp.sliver_interval = interval + 1;
    exp.chain_triple = {ambient, jhat, ambient};
    exp.entry_pair = {ambient, jhat};
    exp.exit_pair = {jhat, ambient};
    return exp;
}

namespace {

void require_transitions(const HybridSystemSpec& system, const InsertionExpansion& exp) {
    for (const auto& pair : {exp.entry_pair, exp.exit_pair}) {
        if (!system.has_reset(pair.first, pair.second)) {
            throw Error(ErrorCode::MissingReset,
                        "insertion requires transition (" + std::to_string(pair.first) + ", " +
                            std::to_string(pair.second) + ")");
        }
    }
}

/// (B1) composition check on states sampled from the expanded trajectory.
void require_chain_property(const HybridSystemSpec& system, const InsertionExpansion& exp,
                            const HybridTrajectory& traj, double tolerance) {
    const auto [i, mid, j] = exp.chain_triple;
    if (i == mid || mid == j) return;  // composition is trivially exact
    std::vector<Vector> samples;
    for (const DenseSegment& seg : traj.segments) {
        const std::size_t stride = std::max<std::size_t>(1, seg.values.size() / 4);
        for (std::size_t idx = 0; idx < seg.values.size(); idx += stride) {
            samples.push_back(seg.values[idx]);
        }
    }
    double scale = 1.0;
    for (const Vector& z : samples) scale = std::max(scale, z.norm());
    const ChainPropertyReport report =
        check_chain_property(system, i, mid, j, samples, tolerance * scale);
    if (!report.pass) {
        throw Error(ErrorCode::ChainPropertyViolation,
                    "transition chain (" + std::to_string(i) + " -> " + std::to_string(mid) +
                        " -> " + std::to_string(j) + ") deviates by " +
                        std::to_string(report.max_defect));
    }
}

}  // namespace

double insertion_gradient_at(const HybridSystemSpec& system, const ModeSequence& modes,
                             const SwitchingSchedule& schedule, double t, int jhat,
                             const SolveOptions& options, double chain_tolerance) {
    if (jhat < 0 || jhat >= system.mode_count()) {
        throw Error(ErrorCode::BadParams, "candidate mode index out of range");
    }
    const InsertionExpansion exp = build_insertion_expansion(modes, schedule, t, jhat);
    require_transitions(system, exp);

    const SwitchingSchedule expanded = validate_schedule(exp.interior, schedule.horizon());
    const HybridTrajectory traj = solve_forward(system, exp.modes, expanded, options);
    require_chain_property(system, exp, traj, chain_tolerance);
    const AdjointTrajectory adj = solve_adjoint(system, traj);
    const GradientReport report = switching_gradient(system, traj, adj);
    return report.gradient[static_cast<std::size_t>(exp.inserted_switch - 1)];
}

double insertion_gradient(const HybridSystemSpec& system, const ModeSequence& modes,
                          const SwitchingSchedule& schedule, int k, int jhat,
                          const SolveOptions& options, double chain_tolerance) {
    if (k < 0 || k > schedule.switch_count()) {
        throw Error(ErrorCode::OutOfDomain, "insertion position out of range");
    }
    return insertion_gradient_at(system, modes, schedule, schedule.time(k), jhat, options,
                                 chain_tolerance);
}

double insertion_fd(const HybridSystemSpec& system, const ModeSequence& modes,
                    const SwitchingSchedule& schedule, double t, int jhat, double h,
                    const SolveOptions& options) {
    InsertionExpansion exp = build_insertion_expansion(modes, schedule, t, jhat);
    require_transitions(system, exp);

    // Open the sliver to length h (clipped to the room up to the next
    // switching time in the expanded schedule).
    const double next = (exp.inserted_switch < static_cast<int>(exp.interior.size()))
                            ? exp.interior[static_cast<std::size_t>(exp.inserted_switch)]
                            : schedule.horizon();
    const double h_used = std::min(h, next - t);
    if (h_used <= 0.0) {
        throw Error(ErrorCode::BadParams, "no room for an insertion dwell at t");
    }
    exp.interior[static_cast<std::size_t>(exp.inserted_switch - 1)] = t + h_used;

    const double expanded_cost =
        reduced_cost(system, exp.modes, validate_schedule(exp.interior, schedule.horizon()),
                     options);
    const double base_cost = reduced_cost(system, modes, schedule, options);
    return (expanded_cost - base_cost) / h_used;
}

const InsertionEntry* InsertionScan::best() const {
    for (const InsertionEntry& entry : entries) {
        if (entry.feasible) return &entry;
    }
    return nullptr;
}

InsertionScan insertion_scan(const HybridSystemSpec& system, const ModeSequence& modes,
                             const SwitchingSchedule& schedule, const std::vector<double>& grid,
                             const std::vector<int>& candidates, const SolveOptions& options,
                             double chain_tolerance) {
    InsertionScan scan;
    for (double t : grid) {
        for (int jhat : candidates) {
            InsertionEntry entry;
            entry.time = t;
            entry.candidate = jhat;
            try {
                entry.gradient =
                    insertion_gradient_at(system, modes, schedule, t, jhat, options,
                                          chain_tolerance);
                entry.feasible = true;
            } catch (const Error& e) {
                entry.feasible = false;
                entry.reason = to_string(e.code());
                entry.gradient = std::numeric_limits<double>::quiet_NaN();
            }
            scan.entries.push_back(std::move(entry));
        }
    }
    std::stable_sort(scan.entries.begin(), scan.entries.end(),
                     [](const InsertionEntry& x, const InsertionEntry& y) {
                         if (x.feasible != y.feasible) return x.feasible;
                         if (!x.feasible) return false;
                         return x.gradient < y.gradient;
                     });
    return scan;
}

}  // namespace switchopt
