#include "switchopt/reporting.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace switchopt {

std::string format_full(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

namespace {

void emit_meta(std::ostringstream& out, const RunMeta& meta) {
    out << "h_max " << format_full(meta.h_max) << '\n';
    out << "fd_step " << format_full(meta.fd_step) << '\n';
    out << "kkt_tol " << format_full(meta.kkt_tol) << '\n';
    out << "seed " << meta.seed << '\n';
}

void emit_state_row(std::ostringstream& out, double t, const Vector& z, int interval,
                    const char* side) {
    out << format_full(t);
    for (Eigen::Index i = 0; i < z.size(); ++i) out << '\t' << format_full(z(i));
    out << '\t' << interval << '\t' << side << '\n';
}

std::string join(const std::vector<double>& values) {
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text += ',';
        text += format_full(values[i]);
    }
    return text.empty() ? "-" : text;
}

std::string join(const std::vector<int>& values) {
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text += ',';
        text += std::to_string(values[i]);
    }
    return text.empty() ? "-" : text;
}

}  // namespace

std::string trajectory_table(const HybridTrajectory& traj) {
    std::ostringstream out;
    out << "# schema: switchopt/trajectory v1\n";
    out << "time";
    const Eigen::Index dim = traj.right_value(0).size();
    for (Eigen::Index i = 0; i < dim; ++i) out << "\tz" << i;
    out << "\tinterval\tside\n";

    const int n_switches = traj.switch_count();
    emit_state_row(out, 0.0, traj.right_value(0), 0, "right");
    for (int n = 0; n <= n_switches; ++n) {
        if (const DenseSegment* seg = traj.segment_for_interval(n)) {
            for (std::size_t i = 1; i + 1 < seg->knots.size(); ++i) {
                emit_state_row(out, seg->knots[i], seg->values[i], n, "-");
            }
        }
        emit_state_row(out, traj.schedule.time(n + 1), traj.left_limit(n + 1), n, "left");
        if (n < n_switches) {
            emit_state_row(out, traj.schedule.time(n + 1), traj.right_value(n + 1), n + 1,
                           "right");
        }
    }
    return out.str();
}

std::string cost_report(const CostBreakdown& breakdown, const HybridTrajectory& traj,
                        const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/cost v1\n";
    out << "total " << format_full(breakdown.total()) << '\n';
    out << "running " << format_full(breakdown.running) << '\n';
    for (std::size_t n = 0; n < breakdown.switching.size(); ++n) {
        out << "switch_" << (n + 1) << ' ' << format_full(breakdown.switching[n]) << " at "
            << format_full(traj.schedule.time(static_cast<int>(n) + 1)) << '\n';
    }
    out << "terminal " << format_full(breakdown.terminal) << '\n';
    emit_meta(out, meta);
    return out.str();
}

std::string gradient_report_text(const GradientReport& report, const SwitchingSchedule& schedule,
                                 const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/gradient v1\n";
    out << "method " << to_string(report.method) << '\n';
    out << "switches " << report.size() << '\n';
    for (int k = 1; k <= report.size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        out << "k " << k << " tau " << format_full(schedule.time(k)) << " g "
            << format_full(report.gradient[i]) << " a " << report.kkt.groups.a(k) << " b "
            << report.kkt.groups.b(k) << " lower_sum " << format_full(report.kkt.lower_sums[i])
            << " upper_sum " << format_full(report.kkt.upper_sums[i]) << " lambda_lower "
            << format_full(report.kkt.lower_multipliers[i]) << " lambda_upper "
            << format_full(report.kkt.upper_multipliers[i]) << '\n';
    }
    out << "kkt_residual " << format_full(report.kkt.residual) << '\n';
    out << "group_eps " << format_full(report.kkt.eps) << '\n';
    emit_meta(out, meta);
    return out.str();
}

namespace {

const char* to_string(FdKind kind) {
    switch (kind) {
        case FdKind::Central: return "central";
        case FdKind::Forward: return "forward";
        case FdKind::Backward: return "backward";
    }
    return "central";
}

}  // namespace

std::string check_grad_table(const std::vector<CheckGradRow>& rows, double rel_tol_variational,
                             double rel_tol_fd, double abs_floor, const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/check-grad v1\n";
    out << "# rel_tol_variational " << format_full(rel_tol_variational) << " rel_tol_fd "
        << format_full(rel_tol_fd) << " abs_floor " << format_full(abs_floor) << '\n';
    out << "k\tadjoint\tvariational\tfd\tfd_refined\tfd_kind\tfd_clipped\terr_variational\terr_"
           "fd\tpass\n";
    for (const CheckGradRow& row : rows) {
        const double err_var = std::abs(row.adjoint - row.variational);
        const double err_fd = std::abs(row.adjoint - row.fd.value);
        out << row.k << '\t' << format_full(row.adjoint) << '\t' << format_full(row.variational)
            << '\t' << format_full(row.fd.value) << '\t' << format_full(row.fd.value_refined)
            << '\t' << to_string(row.fd.kind) << '\t' << (row.fd.clipped ? 1 : 0) << '\t'
            << format_full(err_var) << '\t' << format_full(err_fd) << '\t'
            << ((row.pass_variational && row.pass_fd) ? "PASS" : "FAIL") << '\n';
    }
    std::ostringstream meta_out;
    emit_meta(meta_out, meta);
    std::istringstream lines(meta_out.str());
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
    return out.str();
}

std::string insertion_scan_table(const InsertionScan& scan, const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/insertion-scan v1\n";
    out << "time\tcandidate\tgradient\tfeasible\treason\n";
    for (const InsertionEntry& entry : scan.entries) {
        out << format_full(entry.time) << '\t' << entry.candidate << '\t'
            << format_full(entry.gradient) << '\t' << (entry.feasible ? 1 : 0) << '\t'
            << (entry.reason.empty() ? "-" : entry.reason) << '\n';
    }
    out << "# h_max " << format_full(meta.h_max) << " seed " << meta.seed << '\n';
    return out.str();
}

std::string optimize_trace_table(const OptimizationTrace& trace, const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/optimize-trace v1\n";
    out << "iter\taction\tcost\tkkt_residual\tstep\tschedule\tmodes\tgradient\n";
    for (const IterationRecord& rec : trace.iterations) {
        out << rec.iteration << '\t' << to_string(rec.action) << '\t' << format_full(rec.cost)
            << '\t' << format_full(rec.kkt_residual) << '\t' << format_full(rec.step) << '\t'
            << join(rec.schedule) << '\t' << join(rec.modes) << '\t' << join(rec.gradient)
            << '\n';
    }
    out << "# h_max " << format_full(meta.h_max) << " kkt_tol " << format_full(meta.kkt_tol)
        << " seed " << meta.seed << '\n';
    return out.str();
}

std::string final_summary(const OptimizationTrace& trace, const RunMeta& meta) {
    std::ostringstream out;
    out << "# schema: switchopt/final v1\n";
    out << "converged " << (trace.converged ? 1 : 0) << '\n';
    out << "stalled " << (trace.stalled ? 1 : 0) << '\n';
    out << "cost " << format_full(trace.final_cost) << '\n';
    out << "kkt_residual " << format_full(trace.final_kkt) << '\n';
    out << "schedule " << join(trace.final_schedule.interior()) << '\n';
    out << "modes " << join(trace.final_modes.modes) << '\n';
    emit_meta(out, meta);
    return out.str();
}

std::string error_report(const Error& error) {
    std::ostringstream out;
    out << "# schema: switchopt/error v1\n";
    out << "error_class " << to_string(error.code()) << '\n';
    out << "message " << error.what() << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path file(path);
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write output file '" + path + "'");
    out << content;
}

}  // namespace switchopt
