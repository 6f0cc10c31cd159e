#include "switchopt/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace switchopt {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + message);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream stream(text);
    std::string tok;
    while (stream >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) fail(line, "malformed number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(line, "malformed number '" + tok + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range '" + tok + "'");
    }
}

long parse_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) fail(line, "malformed integer '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(line, "malformed integer '" + tok + "'");
    } catch (const std::out_of_range&) {
        fail(line, "integer out of range '" + tok + "'");
    }
}

bool parse_bool(const std::string& tok, int line) {
    if (tok == "1" || tok == "true") return true;
    if (tok == "0" || tok == "false") return false;
    fail(line, "malformed boolean '" + tok + "'");
}

/// key rows cols v00 v01 ... (row-major)
Matrix parse_matrix(const std::vector<std::string>& tokens, int line) {
    if (tokens.size() < 3) fail(line, "matrix needs 'rows cols values...'");
    const long rows = parse_int(tokens[1], line);
    const long cols = parse_int(tokens[2], line);
    if (rows <= 0 || cols <= 0) fail(line, "matrix shape must be positive");
    if (static_cast<long>(tokens.size()) - 3 != rows * cols) {
        fail(line, "matrix expects " + std::to_string(rows * cols) + " values, got " +
                       std::to_string(tokens.size() - 3));
    }
    Matrix m(rows, cols);
    std::size_t idx = 3;
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) m(r, c) = parse_double(tokens[idx++], line);
    }
    return m;
}

/// key len v0 v1 ...
Vector parse_vector(const std::vector<std::string>& tokens, int line) {
    if (tokens.size() < 2) fail(line, "vector needs 'len values...'");
    const long len = parse_int(tokens[1], line);
    if (len < 0) fail(line, "vector length must be non-negative");
    if (static_cast<long>(tokens.size()) - 2 != len) {
        fail(line, "vector expects " + std::to_string(len) + " values, got " +
                       std::to_string(tokens.size() - 2));
    }
    Vector v(len);
    for (long i = 0; i < len; ++i) v(i) = parse_double(tokens[static_cast<std::size_t>(i) + 2], line);
    return v;
}

std::vector<double> parse_double_list(const std::vector<std::string>& tokens, int line) {
    std::vector<double> values;
    for (std::size_t i = 1; i < tokens.size(); ++i) values.push_back(parse_double(tokens[i], line));
    return values;
}

std::vector<int> parse_int_list(const std::vector<std::string>& tokens, int line) {
    std::vector<int> values;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        values.push_back(static_cast<int>(parse_int(tokens[i], line)));
    }
    return values;
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

void emit_matrix(std::ostringstream& out, const std::string& key, const Matrix& m) {
    if (m.size() == 0) return;
    out << key << ' ' << m.rows() << ' ' << m.cols();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << format_double(m(r, c));
    }
    out << '\n';
}

void emit_vector(std::ostringstream& out, const std::string& key, const Vector& v) {
    if (v.size() == 0) return;
    out << key << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
    out << '\n';
}

struct CostSectionRef {
    QuadraticCost* cost = nullptr;
};

/// Mutable parse state for the inline system sections.
struct InlineBuilder {
    bool used = false;
    int state_dim = 0;
    double horizon = 0.0;
    Vector z0;
    std::map<int, ModeSpec> modes;
    std::map<std::pair<int, int>, ResetMap> resets;
    CostSpec cost;

    HybridSystemSpec finalize(int line) const {
        HybridSystemSpec system;
        system.state_dim = state_dim;
        system.horizon = horizon;
        system.initial_state = z0;
        int expected = 0;
        for (const auto& [index, mode] : modes) {
            if (index != expected++) fail(line, "mode indices must be contiguous from 0");
            system.modes.push_back(mode);
        }
        system.resets = resets;
        system.cost = cost;
        return system;
    }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    InlineBuilder inline_builder;

    enum class Section {
        None,
        Scenario,
        Problem,
        Mode,
        Reset,
        CostRunning,
        CostSwitch,
        CostTerminal,
        Sequence,
        Schedule,
        Options,
    };
    Section section = Section::None;
    int mode_index = -1;
    std::pair<int, int> pair_key{0, 0};

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    int last_line = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        last_line = line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::vector<std::string> tokens = tokenize(raw);
        if (tokens.empty()) continue;

        if (tokens.front().front() == '[') {
            // Re-tokenize the header without brackets.
            std::string header = raw.substr(raw.find('[') + 1);
            const std::size_t close = header.find(']');
            if (close == std::string::npos) fail(line_no, "unterminated section header");
            header.erase(close);
            std::vector<std::string> head = tokenize(header);
            if (head.empty()) fail(line_no, "empty section header");

            const std::string& name = head[0];
            if (name == "scenario") {
                if (!config.scenario) config.scenario = ScenarioParams{};
                section = Section::Scenario;
            } else if (name == "problem") {
                inline_builder.used = true;
                section = Section::Problem;
            } else if (name == "mode") {
                if (head.size() != 2) fail(line_no, "[mode] needs one index");
                inline_builder.used = true;
                mode_index = static_cast<int>(parse_int(head[1], line_no));
                inline_builder.modes[mode_index];  // default-construct
                section = Section::Mode;
            } else if (name == "reset") {
                if (head.size() != 3) fail(line_no, "[reset] needs two mode indices");
                inline_builder.used = true;
                pair_key = {static_cast<int>(parse_int(head[1], line_no)),
                            static_cast<int>(parse_int(head[2], line_no))};
                inline_builder.resets[pair_key];
                section = Section::Reset;
            } else if (name == "cost") {
                if (head.size() < 2) fail(line_no, "[cost] needs a term name");
                inline_builder.used = true;
                if (head[1] == "running") {
                    section = Section::CostRunning;
                } else if (head[1] == "terminal") {
                    section = Section::CostTerminal;
                } else if (head[1] == "switch") {
                    if (head.size() != 4) fail(line_no, "[cost switch] needs two mode indices");
                    pair_key = {static_cast<int>(parse_int(head[2], line_no)),
                                static_cast<int>(parse_int(head[3], line_no))};
                    inline_builder.cost.switching[pair_key];
                    section = Section::CostSwitch;
                } else {
                    fail(line_no, "unknown cost term '" + head[1] + "'");
                }
            } else if (name == "sequence") {
                section = Section::Sequence;
            } else if (name == "schedule") {
                section = Section::Schedule;
            } else if (name == "options") {
                section = Section::Options;
            } else {
                fail(line_no, "unknown section '" + name + "'");
            }
            continue;
        }

        const std::string& key = tokens[0];
        auto scalar = [&]() -> double {
            if (tokens.size() != 2) fail(line_no, "key '" + key + "' expects one value");
            return parse_double(tokens[1], line_no);
        };
        auto integer = [&]() -> long {
            if (tokens.size() != 2) fail(line_no, "key '" + key + "' expects one value");
            return parse_int(tokens[1], line_no);
        };
        auto word = [&]() -> std::string {
            if (tokens.size() != 2) fail(line_no, "key '" + key + "' expects one value");
            return tokens[1];
        };

        switch (section) {
            case Section::None:
                if (key == "schema") {
                    config.schema = static_cast<int>(integer());
                } else {
                    fail(line_no, "key '" + key + "' outside any section");
                }
                break;

            case Section::Scenario: {
                ScenarioParams& p = *config.scenario;
                if (key == "name") {
                    p.name = scenario_name_from_string(word());
                } else if (key == "horizon") {
                    p.horizon = scalar();
                } else if (key == "rates") {
                    p.rates = parse_double_list(tokens, line_no);
                } else if (key == "z0") {
                    p.scalar_z0 = scalar();
                } else if (key == "reset_scale") {
                    p.reset_scale = scalar();
                } else if (key == "generator_form") {
                    p.generator_form = parse_bool(word(), line_no);
                } else if (key == "chain_length") {
                    p.chain_length = static_cast<int>(integer());
                } else if (key == "delay") {
                    p.delay = scalar();
                } else if (key == "dde_coeffs") {
                    const std::vector<double> flat = parse_double_list(tokens, line_no);
                    if (flat.size() % 2 != 0) {
                        fail(line_no, "dde_coeffs expects (c0, c1) pairs");
                    }
                    p.dde_coeffs.clear();
                    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
                        p.dde_coeffs.emplace_back(flat[i], flat[i + 1]);
                    }
                } else if (key == "history_decay") {
                    p.history_decay = scalar();
                } else if (key == "grid_n") {
                    p.grid_n = static_cast<int>(integer());
                } else if (key == "domain_length") {
                    p.domain_length = scalar();
                } else if (key == "diffusivity") {
                    p.diffusivity = scalar();
                } else if (key == "gaussian_width") {
                    p.gaussian_width = scalar();
                } else if (key == "include_growth") {
                    p.include_growth = parse_bool(word(), line_no);
                } else if (key == "profile") {
                    p.profile = initial_profile_from_string(word());
                } else {
                    fail(line_no, "unknown key '" + key + "' in [scenario]");
                }
                break;
            }

            case Section::Problem:
                if (key == "state_dim") {
                    inline_builder.state_dim = static_cast<int>(integer());
                } else if (key == "horizon") {
                    inline_builder.horizon = scalar();
                } else if (key == "z0") {
                    inline_builder.z0 = parse_vector(tokens, line_no);
                } else {
                    fail(line_no, "unknown key '" + key + "' in [problem]");
                }
                break;

            case Section::Mode: {
                ModeSpec& mode = inline_builder.modes[mode_index];
                Nonlinearity& f = mode.nonlinearity;
                if (key == "generator") {
                    mode.generator = parse_matrix(tokens, line_no);
                } else if (key == "stepper") {
                    mode.stepper = stepper_kind_from_string(word());
                } else if (key == "f") {
                    f.kind = nonlinearity_kind_from_string(word());
                } else if (key == "f_matrix") {
                    f.coeff = parse_matrix(tokens, line_no);
                } else if (key == "f_offset") {
                    f.offset = parse_vector(tokens, line_no);
                } else if (key == "f_c") {
                    if (tokens.size() != 5) fail(line_no, "f_c expects c0 c1 c2 c3");
                    f.c0 = parse_double(tokens[1], line_no);
                    f.c1 = parse_double(tokens[2], line_no);
                    f.c2 = parse_double(tokens[3], line_no);
                    f.c3 = parse_double(tokens[4], line_no);
                } else if (key == "f_rate") {
                    f.rate = scalar();
                } else if (key == "f_capacity") {
                    f.capacity = scalar();
                } else {
                    fail(line_no, "unknown key '" + key + "' in [mode]");
                }
                break;
            }

            case Section::Reset: {
                ResetMap& reset = inline_builder.resets[pair_key];
                if (key == "kind") {
                    reset.kind = reset_kind_from_string(word());
                } else if (key == "matrix") {
                    reset.scale = parse_matrix(tokens, line_no);
                } else if (key == "offset") {
                    reset.offset = parse_vector(tokens, line_no);
                } else if (key == "gain") {
                    reset.gain = scalar();
                } else {
                    fail(line_no, "unknown key '" + key + "' in [reset]");
                }
                break;
            }

            case Section::CostRunning:
            case Section::CostSwitch:
            case Section::CostTerminal: {
                QuadraticCost& cost = section == Section::CostRunning
                                          ? inline_builder.cost.running
                                          : (section == Section::CostTerminal
                                                 ? inline_builder.cost.terminal
                                                 : inline_builder.cost.switching[pair_key]);
                if (key == "c0") {
                    cost.constant = scalar();
                } else if (key == "ct") {
                    cost.time_slope = scalar();
                } else if (key == "q") {
                    cost.linear = parse_vector(tokens, line_no);
                } else if (key == "Q") {
                    cost.quadratic = parse_matrix(tokens, line_no);
                } else {
                    fail(line_no, "unknown key '" + key + "' in [cost]");
                }
                break;
            }

            case Section::Sequence:
                if (key == "modes") {
                    config.sequence = parse_int_list(tokens, line_no);
                } else {
                    fail(line_no, "unknown key '" + key + "' in [sequence]");
                }
                break;

            case Section::Schedule:
                if (key == "times") {
                    config.schedule_times = parse_double_list(tokens, line_no);
                } else {
                    fail(line_no, "unknown key '" + key + "' in [schedule]");
                }
                break;

            case Section::Options: {
                OptimizerOptions& opt = config.optimizer;
                if (key == "h_max") {
                    opt.solve.h_max = scalar();
                } else if (key == "blowup") {
                    opt.solve.blowup_limit = scalar();
                } else if (key == "fd_step") {
                    config.fd_step = scalar();
                } else if (key == "kkt_tol") {
                    opt.kkt_tol = scalar();
                } else if (key == "max_iters") {
                    opt.max_iters = static_cast<int>(integer());
                } else if (key == "armijo_slope") {
                    opt.armijo_slope = scalar();
                } else if (key == "backtrack") {
                    opt.backtrack = scalar();
                } else if (key == "initial_step") {
                    opt.initial_step = scalar();
                } else if (key == "insertion_threshold") {
                    opt.insertion_threshold = scalar();
                } else if (key == "insertion_grid") {
                    opt.insertion_grid = static_cast<int>(integer());
                } else if (key == "max_insertions") {
                    opt.max_insertions = static_cast<int>(integer());
                } else if (key == "group_eps") {
                    opt.group_eps = scalar();
                } else if (key == "seed") {
                    config.seed = integer();
                } else if (key == "candidates") {
                    config.candidates = parse_int_list(tokens, line_no);
                } else if (key == "grid") {
                    config.scan_grid = parse_double_list(tokens, line_no);
                } else {
                    fail(line_no, "unknown key '" + key + "' in [options]");
                }
                break;
            }
        }
    }

    if (config.scenario && inline_builder.used) {
        fail(last_line, "configuration mixes [scenario] with inline system sections");
    }
    if (!config.scenario && !inline_builder.used) {
        fail(last_line, "configuration defines neither a scenario nor an inline system");
    }
    if (inline_builder.used) {
        config.inline_system = inline_builder.finalize(last_line);
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

void emit_cost(std::ostringstream& out, const std::string& header, const QuadraticCost& cost) {
    out << '[' << header << "]\n";
    if (cost.constant != 0.0) out << "c0 " << format_double(cost.constant) << '\n';
    if (cost.time_slope != 0.0) out << "ct " << format_double(cost.time_slope) << '\n';
    emit_vector(out, "q", cost.linear);
    emit_matrix(out, "Q", cost.quadratic);
}

}  // namespace

std::string emit_config(const RunConfig& config) {
    std::ostringstream out;
    out << "# switchopt run configuration\n";
    out << "schema " << config.schema << '\n';

    if (config.scenario) {
        const ScenarioParams& p = *config.scenario;
        out << "\n[scenario]\n";
        out << "name " << to_string(p.name) << '\n';
        if (p.horizon > 0.0) out << "horizon " << format_double(p.horizon) << '\n';
        switch (p.name) {
            case ScenarioName::ScalarLinear:
                out << "rates";
                for (double a : p.rates) out << ' ' << format_double(a);
                out << '\n';
                out << "z0 " << format_double(p.scalar_z0) << '\n';
                out << "reset_scale " << format_double(p.reset_scale) << '\n';
                break;
            case ScenarioName::OdePlanar:
                out << "generator_form " << (p.generator_form ? 1 : 0) << '\n';
                break;
            case ScenarioName::DdeChain:
                out << "chain_length " << p.chain_length << '\n';
                out << "delay " << format_double(p.delay) << '\n';
                out << "dde_coeffs";
                for (const auto& [c0, c1] : p.dde_coeffs) {
                    out << ' ' << format_double(c0) << ' ' << format_double(c1);
                }
                out << '\n';
                out << "history_decay " << format_double(p.history_decay) << '\n';
                out << "z0 " << format_double(p.scalar_z0) << '\n';
                break;
            case ScenarioName::TransportDiffusion:
                out << "grid_n " << p.grid_n << '\n';
                out << "domain_length " << format_double(p.domain_length) << '\n';
                out << "diffusivity " << format_double(p.diffusivity) << '\n';
                out << "gaussian_width " << format_double(p.gaussian_width) << '\n';
                out << "include_growth " << (p.include_growth ? 1 : 0) << '\n';
                out << "profile " << to_string(p.profile) << '\n';
                break;
        }
    }

    if (config.inline_system) {
        const HybridSystemSpec& system = *config.inline_system;
        out << "\n[problem]\n";
        out << "state_dim " << system.state_dim << '\n';
        out << "horizon " << format_double(system.horizon) << '\n';
        emit_vector(out, "z0", system.initial_state);

        for (std::size_t j = 0; j < system.modes.size(); ++j) {
            const ModeSpec& mode = system.modes[j];
            out << "\n[mode " << j << "]\n";
            out << "stepper " << to_string(mode.stepper) << '\n';
            emit_matrix(out, "generator", mode.generator);
            const Nonlinearity& f = mode.nonlinearity;
            out << "f " << to_string(f.kind) << '\n';
            switch (f.kind) {
                case NonlinearityKind::Zero:
                    break;
                case NonlinearityKind::Linear:
                    emit_matrix(out, "f_matrix", f.coeff);
                    emit_vector(out, "f_offset", f.offset);
                    break;
                case NonlinearityKind::Cubic:
                    out << "f_c " << format_double(f.c0) << ' ' << format_double(f.c1) << ' '
                        << format_double(f.c2) << ' ' << format_double(f.c3) << '\n';
                    break;
                case NonlinearityKind::Logistic:
                    out << "f_rate " << format_double(f.rate) << '\n';
                    out << "f_capacity " << format_double(f.capacity) << '\n';
                    break;
            }
        }

        for (const auto& [pair, reset] : system.resets) {
            out << "\n[reset " << pair.first << ' ' << pair.second << "]\n";
            out << "kind " << to_string(reset.kind) << '\n';
            if (reset.kind == ResetKind::Affine) {
                emit_matrix(out, "matrix", reset.scale);
                emit_vector(out, "offset", reset.offset);
            } else if (reset.kind == ResetKind::Cubic) {
                out << "gain " << format_double(reset.gain) << '\n';
            }
        }

        if (!system.cost.running.is_zero()) {
            out << '\n';
            emit_cost(out, "cost running", system.cost.running);
        }
        for (const auto& [pair, cost] : system.cost.switching) {
            out << '\n';
            emit_cost(out,
                      "cost switch " + std::to_string(pair.first) + ' ' +
                          std::to_string(pair.second),
                      cost);
        }
        if (!system.cost.terminal.is_zero()) {
            out << '\n';
            emit_cost(out, "cost terminal", system.cost.terminal);
        }
    }

    if (config.sequence) {
        out << "\n[sequence]\nmodes";
        for (int j : *config.sequence) out << ' ' << j;
        out << '\n';
    }
    if (config.schedule_times) {
        out << "\n[schedule]\ntimes";
        for (double t : *config.schedule_times) out << ' ' << format_double(t);
        out << '\n';
    }

    const OptimizerOptions defaults;
    const OptimizerOptions& opt = config.optimizer;
    out << "\n[options]\n";
    if (opt.solve.h_max != defaults.solve.h_max) {
        out << "h_max " << format_double(opt.solve.h_max) << '\n';
    }
    if (opt.solve.blowup_limit != defaults.solve.blowup_limit) {
        out << "blowup " << format_double(opt.solve.blowup_limit) << '\n';
    }
    if (config.fd_step != 0.0) out << "fd_step " << format_double(config.fd_step) << '\n';
    if (opt.kkt_tol != defaults.kkt_tol) out << "kkt_tol " << format_double(opt.kkt_tol) << '\n';
    if (opt.max_iters != defaults.max_iters) out << "max_iters " << opt.max_iters << '\n';
    if (opt.armijo_slope != defaults.armijo_slope) {
        out << "armijo_slope " << format_double(opt.armijo_slope) << '\n';
    }
    if (opt.backtrack != defaults.backtrack) {
        out << "backtrack " << format_double(opt.backtrack) << '\n';
    }
    if (opt.initial_step != defaults.initial_step) {
        out << "initial_step " << format_double(opt.initial_step) << '\n';
    }
    if (opt.insertion_threshold != defaults.insertion_threshold) {
        out << "insertion_threshold " << format_double(opt.insertion_threshold) << '\n';
    }
    if (opt.insertion_grid != defaults.insertion_grid) {
        out << "insertion_grid " << opt.insertion_grid << '\n';
    }
    if (opt.max_insertions != defaults.max_insertions) {
        out << "max_insertions " << opt.max_insertions << '\n';
    }
    if (opt.group_eps != defaults.group_eps) {
        out << "group_eps " << format_double(opt.group_eps) << '\n';
    }
    if (config.seed != 0) out << "seed " << config.seed << '\n';
    if (!config.candidates.empty()) {
        out << "candidates";
        for (int j : config.candidates) out << ' ' << j;
        out << '\n';
    }
    if (!config.scan_grid.empty()) {
        out << "grid";
        for (double t : config.scan_grid) out << ' ' << format_double(t);
        out << '\n';
    }
    return out.str();
}

ResolvedRun resolve_run(const RunConfig& config) {
    ResolvedRun run;
    if (config.scenario) {
        Scenario scenario = build_scenario(*config.scenario);
        run.system = std::move(scenario.system);
        run.modes = std::move(scenario.modes);
        run.schedule = std::move(scenario.schedule);
        run.solve = scenario.recommended;
    } else if (config.inline_system) {
        run.system = *config.inline_system;
        if (!config.sequence) {
            throw Error(ErrorCode::ConfigError, "inline system requires a [sequence]");
        }
        if (!config.schedule_times) {
            throw Error(ErrorCode::ConfigError, "inline system requires a [schedule]");
        }
    } else {
        throw Error(ErrorCode::ConfigError, "configuration has no system");
    }

    if (config.sequence) run.modes.modes = *config.sequence;
    if (config.schedule_times) {
        run.schedule = validate_schedule(*config.schedule_times, run.system.horizon);
    }
    if (config.optimizer.solve.h_max > 0.0) run.solve.h_max = config.optimizer.solve.h_max;
    if (config.optimizer.solve.blowup_limit > 0.0) {
        run.solve.blowup_limit = config.optimizer.solve.blowup_limit;
    }

    validate_problem(run.system, run.modes, run.schedule);
    return run;
}

}  // namespace switchopt
