// switchopt command-line driver: simulate hybrid switched systems, compute
// and cross-check switching-time gradients, scan mode insertions, and run the
// projected-descent optimizers. One subcommand per invocation; outputs are
// written once to the --out directory.

#include "switchopt/adjoint.hpp"
#include "switchopt/config.hpp"
#include "switchopt/gradients.hpp"
#include "switchopt/optimize.hpp"
#include "switchopt/reporting.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace switchopt;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    double h_max = 0.0;
    double fd_step = 0.0;
    double kkt_tol = 0.0;
    long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--h-max", args.h_max, "mesh width override");
    cmd->add_option("--fd-step", args.fd_step, "finite-difference step override");
    cmd->add_option("--kkt-tol", args.kkt_tol, "KKT tolerance override");
    cmd->add_option("--seed", args.seed, "seed echoed into reports");
}

struct LoadedRun {
    RunConfig config;
    ResolvedRun run;
    RunMeta meta;
};

LoadedRun load(const CommonArgs& args) {
    LoadedRun loaded;
    loaded.config = parse_config_file(args.config_path);
    if (args.h_max > 0.0) loaded.config.optimizer.solve.h_max = args.h_max;
    if (args.fd_step > 0.0) loaded.config.fd_step = args.fd_step;
    if (args.kkt_tol > 0.0) loaded.config.optimizer.kkt_tol = args.kkt_tol;
    if (args.seed >= 0) loaded.config.seed = args.seed;
    loaded.run = resolve_run(loaded.config);

    const StepControl control = resolve_options(loaded.run.solve, loaded.run.system);
    loaded.meta.h_max = control.h_max;
    loaded.meta.fd_step = loaded.config.fd_step > 0.0
                              ? loaded.config.fd_step
                              : 1e-5 * loaded.run.system.horizon;
    loaded.meta.kkt_tol = loaded.config.optimizer.kkt_tol;
    loaded.meta.seed = loaded.config.seed;
    return loaded;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

int run_simulate(const CommonArgs& args) {
    LoadedRun loaded = load(args);
    const HybridTrajectory traj =
        solve_forward(loaded.run.system, loaded.run.modes, loaded.run.schedule, loaded.run.solve);
    const CostBreakdown breakdown = cost_breakdown(loaded.run.system, traj);
    write_text_file(out_path(args, "trajectory.tsv"), trajectory_table(traj));
    write_text_file(out_path(args, "cost_report.txt"),
                    cost_report(breakdown, traj, loaded.meta));
    std::cout << "cost " << format_full(breakdown.total()) << "\nfinal_state";
    const Vector& zt = traj.state_at_horizon();
    for (Eigen::Index i = 0; i < zt.size(); ++i) std::cout << ' ' << format_full(zt(i));
    std::cout << '\n';
    return 0;
}

int run_gradient(const CommonArgs& args) {
    LoadedRun loaded = load(args);
    const HybridTrajectory traj =
        solve_forward(loaded.run.system, loaded.run.modes, loaded.run.schedule, loaded.run.solve);
    const AdjointTrajectory adj = solve_adjoint(loaded.run.system, traj);
    const GradientReport report = switching_gradient(
        loaded.run.system, traj, adj, loaded.config.optimizer.group_eps);
    write_text_file(out_path(args, "gradient_report.txt"),
                    gradient_report_text(report, traj.schedule, loaded.meta));
    std::cout << gradient_report_text(report, traj.schedule, loaded.meta);
    return 0;
}

int run_check_grad(const CommonArgs& args) {
    LoadedRun loaded = load(args);
    const HybridSystemSpec& system = loaded.run.system;
    const HybridTrajectory traj =
        solve_forward(system, loaded.run.modes, loaded.run.schedule, loaded.run.solve);
    const AdjointTrajectory adj = solve_adjoint(system, traj);
    const GradientReport adj_report =
        switching_gradient(system, traj, adj, loaded.config.optimizer.group_eps);

    const double rel_tol_variational = 1e-4;
    const double rel_tol_fd = 1e-3;
    const double abs_floor = 1e-6;

    std::vector<CheckGradRow> rows;
    bool all_pass = true;
    for (int k = 1; k <= traj.switch_count(); ++k) {
        CheckGradRow row;
        row.k = k;
        row.adjoint = adj_report.gradient[static_cast<std::size_t>(k - 1)];
        const VariationalTrajectory var = solve_variational(system, traj, k);
        row.variational = variational_gradient(system, traj, k, var);
        row.fd = fd_gradient(system, loaded.run.modes, loaded.run.schedule, k, loaded.meta.fd_step,
                             loaded.run.solve);
        const double scale = std::abs(row.adjoint);
        row.pass_variational =
            std::abs(row.adjoint - row.variational) <= rel_tol_variational * std::max(1.0, scale);
        row.pass_fd = (scale < 1e-3)
                          ? std::abs(row.adjoint - row.fd.value) <= abs_floor
                          : std::abs(row.adjoint - row.fd.value) <= rel_tol_fd * scale;
        all_pass = all_pass && row.pass_variational && row.pass_fd;
        rows.push_back(row);
    }
    const std::string table =
        check_grad_table(rows, rel_tol_variational, rel_tol_fd, abs_floor, loaded.meta);
    write_text_file(out_path(args, "check_grad.txt"), table);
    std::cout << table;
    return all_pass ? 0 : 1;
}

int run_insert_scan(const CommonArgs& args) {
    LoadedRun loaded = load(args);
    std::vector<double> grid = loaded.config.scan_grid;
    if (grid.empty()) {
        const int count = loaded.config.optimizer.insertion_grid;
        for (int i = 1; i <= count; ++i) {
            grid.push_back(loaded.run.system.horizon * i / (count + 1));
        }
    }
    std::vector<int> candidates = loaded.config.candidates;
    if (candidates.empty()) {
        for (int j = 0; j < loaded.run.system.mode_count(); ++j) candidates.push_back(j);
    }
    const InsertionScan scan = insertion_scan(loaded.run.system, loaded.run.modes,
                                              loaded.run.schedule, grid, candidates,
                                              loaded.run.solve);
    const std::string table = insertion_scan_table(scan, loaded.meta);
    write_text_file(out_path(args, "insertion_scan.tsv"), table);
    std::cout << table;
    return 0;
}

int run_optimize(const CommonArgs& args, bool full) {
    LoadedRun loaded = load(args);
    OptimizerOptions options = loaded.config.optimizer;
    options.solve = loaded.run.solve;
    if (options.group_eps < 0.0) options.group_eps = -1.0;
    const OptimizationTrace trace =
        full ? optimize_sequence(loaded.run.system, loaded.run.modes, loaded.run.schedule, options)
             : optimize_times(loaded.run.system, loaded.run.modes, loaded.run.schedule, options);
    write_text_file(out_path(args, "optimize_trace.tsv"),
                    optimize_trace_table(trace, loaded.meta));
    write_text_file(out_path(args, "final_summary.txt"), final_summary(trace, loaded.meta));
    std::cout << final_summary(trace, loaded.meta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switchopt: switching-time and mode-sequence optimization for hybrid "
                 "semilinear evolutions"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate and report the trajectory");
    CLI::App* gradient = app.add_subcommand("gradient", "adjoint switching-time gradient");
    CLI::App* check = app.add_subcommand("check-grad", "adjoint vs variational vs FD");
    CLI::App* scan = app.add_subcommand("insert-scan", "mode-insertion gradient scan");
    CLI::App* optimize = app.add_subcommand("optimize", "projected descent on switching times");
    CLI::App* full = app.add_subcommand("full-opt", "descent plus insertion outer loop");
    for (CLI::App* cmd : {simulate, gradient, check, scan, optimize, full}) {
        add_common(cmd, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << '\n' << e.what() << '\n';
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(args);
        if (gradient->parsed()) return run_gradient(args);
        if (check->parsed()) return run_check_grad(args);
        if (scan->parsed()) return run_insert_scan(args);
        if (optimize->parsed()) return run_optimize(args, false);
        if (full->parsed()) return run_optimize(args, true);
    } catch (const switchopt::Error& e) {
        std::cerr << e.what() << '\n';
        try {
            switchopt::write_text_file(
                (std::filesystem::path(args.out_dir) / "error_report.txt").string(),
                switchopt::error_report(e));
        } catch (...) {
        }
        return e.code() == switchopt::ErrorCode::ConfigError ? 4 : 5;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 5;
    }
    return 0;
}
