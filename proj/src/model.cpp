#include "switchopt/model.hpp"

#include <cmath>
#include <string>

namespace switchopt {

const char* to_string(StepperKind kind) {
    switch (kind) {
        case StepperKind::RungeKutta4: return "rk4";
        case StepperKind::ExponentialSplitting: return "splitting";
    }
    return "rk4";
}

StepperKind stepper_kind_from_string(const std::string& name) {
    if (name == "rk4") return StepperKind::RungeKutta4;
    if (name == "splitting") return StepperKind::ExponentialSplitting;
    throw Error(ErrorCode::ConfigError, "unknown stepper kind '" + name + "'");
}

const QuadraticCost& CostSpec::switching_cost(int from, int to) const {
    static const QuadraticCost kZero{};
    auto it = switching.find({from, to});
    return it == switching.end() ? kZero : it->second;
}

const ResetMap& HybridSystemSpec::reset(int from, int to) const {
    static const ResetMap kIdentity{};
    if (from == to) return kIdentity;
    auto it = resets.find({from, to});
    if (it == resets.end()) {
        throw Error(ErrorCode::MissingReset, "no reset map for mode pair (" +
                                                 std::to_string(from) + ", " + std::to_string(to) +
                                                 ")");
    }
    return it->second;
}

bool HybridSystemSpec::has_reset(int from, int to) const {
    return from == to || resets.count({from, to}) > 0;
}

void HybridSystemSpec::validate() const {
    if (state_dim <= 0) throw Error(ErrorCode::BadParams, "state_dim must be positive");
    if (horizon <= 0.0) throw Error(ErrorCode::BadParams, "horizon must be positive");
    if (modes.empty()) throw Error(ErrorCode::BadParams, "mode table is empty");
    if (initial_state.size() != state_dim) {
        throw Error(ErrorCode::BadParams, "initial state has dimension " +
                                              std::to_string(initial_state.size()) +
                                              ", expected " + std::to_string(state_dim));
    }
    if (!initial_state.allFinite()) {
        throw Error(ErrorCode::NonFiniteState, "initial state is not finite");
    }
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const Matrix& a = modes[j].generator;
        if (a.rows() != state_dim || a.cols() != state_dim) {
            throw Error(ErrorCode::BadParams, "generator of mode " + std::to_string(j) +
                                                  " is not " + std::to_string(state_dim) + "x" +
                                                  std::to_string(state_dim));
        }
    }
    for (const auto& [pair, reset] : resets) {
        if (pair.first == pair.second) {
            throw Error(ErrorCode::BadParams, "reset table must not contain diagonal pairs");
        }
        if (reset.kind == ResetKind::Affine &&
            (reset.scale.rows() != state_dim || reset.scale.cols() != state_dim)) {
            throw Error(ErrorCode::BadParams, "affine reset matrix for pair (" +
                                                  std::to_string(pair.first) + ", " +
                                                  std::to_string(pair.second) +
                                                  ") has wrong dimensions");
        }
    }
}

double SwitchingSchedule::time(int k) const {
    const int n = switch_count();
    if (k < 0 || k > n + 1) {
        throw Error(ErrorCode::OutOfDomain,
                    "switching-time index " + std::to_string(k) + " outside 0.." +
                        std::to_string(n + 1));
    }
    if (k == 0) return 0.0;
    if (k == n + 1) return horizon_;
    return interior_[static_cast<std::size_t>(k - 1)];
}

bool operator==(const SwitchingSchedule& a, const SwitchingSchedule& b) {
    return a.horizon() == b.horizon() && a.interior() == b.interior();
}

SwitchingSchedule validate_schedule(const std::vector<double>& raw, double horizon) {
    if (horizon <= 0.0) throw Error(ErrorCode::BadParams, "horizon must be positive");
    double prev = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double t = raw[i];
        if (!std::isfinite(t) || t < 0.0 || t > horizon) {
            throw Error(ErrorCode::OutOfHorizon, "tau_" + std::to_string(i + 1) + " = " +
                                                     std::to_string(t) + " outside [0, " +
                                                     std::to_string(horizon) + "]");
        }
        if (t < prev) {
            throw Error(ErrorCode::MonotonicityViolation,
                        "schedule decreases at index " + std::to_string(i + 1));
        }
        prev = t;
    }
    return SwitchingSchedule(raw, horizon);
}

void validate_problem(const HybridSystemSpec& system, const ModeSequence& modes,
                      const SwitchingSchedule& schedule) {
    system.validate();
    if (schedule.horizon() != system.horizon) {
        throw Error(ErrorCode::ScheduleMismatch, "schedule horizon differs from system horizon");
    }
    if (modes.size() != schedule.switch_count() + 1) {
        throw Error(ErrorCode::ScheduleMismatch,
                    "mode sequence length " + std::to_string(modes.size()) +
                        " does not match N+1 = " + std::to_string(schedule.switch_count() + 1));
    }
    for (int n = 0; n < modes.size(); ++n) {
        if (modes.at(n) < 0 || modes.at(n) >= system.mode_count()) {
            throw Error(ErrorCode::BadParams,
                        "mode index " + std::to_string(modes.at(n)) + " out of range");
        }
    }
}

CoincidenceGroups coincidence_groups(const SwitchingSchedule& schedule, double eps) {
    if (eps < 0.0) throw Error(ErrorCode::BadParams, "eps must be non-negative");
    const int n = schedule.switch_count();
    // Maximal runs over indices 0..N+1 under eps-chained equality of times.
    std::vector<int> run_start(static_cast<std::size_t>(n) + 2);
    std::vector<int> run_end(static_cast<std::size_t>(n) + 2);
    int start = 0;
    for (int k = 1; k <= n + 1; ++k) {
        if (schedule.time(k) - schedule.time(k - 1) > eps) {
            for (int m = start; m < k; ++m) {
                run_start[static_cast<std::size_t>(m)] = start;
                run_end[static_cast<std::size_t>(m)] = k - 1;
            }
            start = k;
        }
    }
    for (int m = start; m <= n + 1; ++m) {
        run_start[static_cast<std::size_t>(m)] = start;
        run_end[static_cast<std::size_t>(m)] = n + 1;
    }

    CoincidenceGroups groups;
    groups.lower.reserve(static_cast<std::size_t>(n));
    groups.upper.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        groups.lower.push_back(run_start[static_cast<std::size_t>(k)]);
        groups.upper.push_back(run_end[static_cast<std::size_t>(k)]);
    }
    return groups;
}

double default_group_eps(double horizon) { return 1e-9 * horizon; }

ChainPropertyReport check_chain_property(const HybridSystemSpec& system, int i, int k, int j,
                                         const std::vector<Vector>& samples, double tolerance) {
    const ResetMap& direct = system.reset(i, j);
    const ResetMap& first = system.reset(i, k);
    const ResetMap& second = system.reset(k, j);

    ChainPropertyReport report;
    report.tolerance = tolerance;
    for (const Vector& z : samples) {
        const double defect = (direct.apply(z) - second.apply(first.apply(z))).norm();
        report.max_defect = std::max(report.max_defect, defect);
    }
    report.pass = report.max_defect <= tolerance;
    return report;
}

}  // namespace switchopt
