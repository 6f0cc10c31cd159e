#include "switchopt/scenarios.hpp"

#include <cmath>

namespace switchopt {

const char* to_string(ScenarioName name) {
    switch (name) {
        case ScenarioName::ScalarLinear: return "scalar-linear";
        case ScenarioName::OdePlanar: return "ode-planar";
        case ScenarioName::DdeChain: return "dde-chain";
        case ScenarioName::TransportDiffusion: return "transport-diffusion";
    }
    return "scalar-linear";
}

ScenarioName scenario_name_from_string(const std::string& name) {
    if (name == "scalar-linear") return ScenarioName::ScalarLinear;
    if (name == "ode-planar") return ScenarioName::OdePlanar;
    if (name == "dde-chain") return ScenarioName::DdeChain;
    if (name == "transport-diffusion") return ScenarioName::TransportDiffusion;
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
}

const char* to_string(InitialProfile profile) {
    switch (profile) {
        case InitialProfile::Gaussian: return "gaussian";
        case InitialProfile::Wavepacket: return "wavepacket";
    }
    return "gaussian";
}

InitialProfile initial_profile_from_string(const std::string& name) {
    if (name == "gaussian") return InitialProfile::Gaussian;
    if (name == "wavepacket") return InitialProfile::Wavepacket;
    throw Error(ErrorCode::BadParams, "unknown initial profile '" + name + "'");
}

ScenarioParams default_params(ScenarioName name) {
    ScenarioParams params;
    params.name = name;
    switch (name) {
        case ScenarioName::ScalarLinear:
        case ScenarioName::OdePlanar:
        case ScenarioName::TransportDiffusion:
            params.horizon = 1.0;
            break;
        case ScenarioName::DdeChain:
            params.horizon = 2.0;
            break;
    }
    return params;
}

Matrix periodic_first_difference(int n, double dx) {
    Matrix d = Matrix::Zero(n, n);
    const double w = 1.0 / (2.0 * dx);
    for (int i = 0; i < n; ++i) {
        d(i, (i + 1) % n) = w;
        d(i, (i - 1 + n) % n) = -w;
    }
    return d;
}

Matrix periodic_second_difference(int n, double dx) {
    Matrix d = Matrix::Zero(n, n);
    const double w = 1.0 / (dx * dx);
    for (int i = 0; i < n; ++i) {
        d(i, i) = -2.0 * w;
        d(i, (i + 1) % n) = w;
        d(i, (i - 1 + n) % n) = w;
    }
    return d;
}

namespace {

double resolved_horizon(const ScenarioParams& params) {
    if (params.horizon > 0.0) return params.horizon;
    return default_params(params.name).horizon;
}

Scenario build_scalar_linear(const ScenarioParams& params) {
    if (params.rates.empty()) throw Error(ErrorCode::BadParams, "scalar-linear needs rates");
    const double horizon = resolved_horizon(params);

    Scenario out;
    out.system.state_dim = 1;
    out.system.horizon = horizon;
    out.system.initial_state = Vector::Constant(1, params.scalar_z0);
    for (double a : params.rates) {
        ModeSpec mode;
        mode.generator = Matrix::Constant(1, 1, a);
        out.system.modes.push_back(std::move(mode));
    }
    const int m = static_cast<int>(params.rates.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            out.system.resets[{i, j}] =
                params.reset_scale == 1.0
                    ? ResetMap::identity()
                    : ResetMap::affine(Matrix::Constant(1, 1, params.reset_scale));
        }
    }
    out.system.cost.running = QuadraticCost::pure_quadratic(Matrix::Identity(1, 1));

    out.modes.modes = m >= 2 ? std::vector<int>{0, 1} : std::vector<int>{0};
    out.schedule = validate_schedule(
        m >= 2 ? std::vector<double>{0.5 * horizon} : std::vector<double>{}, horizon);
    return out;
}

Scenario build_ode_planar(const ScenarioParams& params) {
    const double horizon = resolved_horizon(params);

    Matrix rotation(2, 2);
    rotation << 0.1, 1.0, -1.0, 0.1;
    Matrix contraction(2, 2);
    contraction << -1.0, 0.2, -0.2, -0.8;

    Scenario out;
    out.system.state_dim = 2;
    out.system.horizon = horizon;
    out.system.initial_state = Vector(2);
    out.system.initial_state << 1.0, 0.5;

    for (const Matrix& a : {rotation, contraction}) {
        ModeSpec mode;
        if (params.generator_form) {
            mode.generator = a;
        } else {
            mode.generator = Matrix::Zero(2, 2);
            mode.nonlinearity = Nonlinearity::linear(a);
        }
        out.system.modes.push_back(std::move(mode));
    }

    Matrix reset(2, 2);
    reset << 0.9, 0.0, 0.1, 1.05;
    out.system.resets[{0, 1}] = ResetMap::affine(reset);
    out.system.resets[{1, 0}] = ResetMap::identity();

    out.system.cost.running = QuadraticCost::pure_quadratic(Matrix::Identity(2, 2));
    // A mildly state-dependent switching cost; exercises the evaluation-point
    // motion term of the gradient.
    QuadraticCost switch_cost;
    switch_cost.time_slope = 0.1;
    switch_cost.quadratic = 0.05 * Matrix::Identity(2, 2);
    out.system.cost.switching[{0, 1}] = switch_cost;

    out.modes.modes = {0, 1};
    out.schedule = validate_schedule({0.4 * horizon}, horizon);
    return out;
}

Scenario build_dde_chain(const ScenarioParams& params) {
    if (params.chain_length < 4) {
        throw Error(ErrorCode::BadParams, "chain length must be at least 4");
    }
    if (params.delay <= 0.0) throw Error(ErrorCode::BadParams, "delay must be positive");
    if (params.dde_coeffs.empty()) {
        throw Error(ErrorCode::BadParams, "dde-chain needs per-mode coefficients");
    }
    const double horizon = resolved_horizon(params);
    const int c = params.chain_length;
    const int dim = c + 1;
    const double rate = c / params.delay;

    Scenario out;
    out.system.state_dim = dim;
    out.system.horizon = horizon;

    // State (z, w_1, ..., w_c); w_i tracks z(t - i r / c) through a first-order
    // compartment cascade, so w_c feeds the delayed term.
    for (const auto& [c0, c1] : params.dde_coeffs) {
        ModeSpec mode;
        mode.generator = Matrix::Zero(dim, dim);
        mode.generator(0, 0) = c0;
        mode.generator(0, dim - 1) = c1;
        for (int i = 1; i <= c; ++i) {
            mode.generator(i, i - 1) = rate;
            mode.generator(i, i) = -rate;
        }
        mode.stepper = StepperKind::ExponentialSplitting;
        out.system.modes.push_back(std::move(mode));
    }
    const int m = static_cast<int>(params.dde_coeffs.size());
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) out.system.resets[{i, j}] = ResetMap::identity();
        }
    }

    Matrix q = Matrix::Zero(dim, dim);
    q(0, 0) = 1.0;
    out.system.cost.running = QuadraticCost::pure_quadratic(std::move(q));

    // History phi(theta) = z0 * exp(history_decay * theta) sampled at the
    // compartment lags.
    Vector z0 = Vector::Zero(dim);
    z0(0) = params.scalar_z0;
    for (int i = 1; i <= c; ++i) {
        const double theta = -params.delay * i / c;
        z0(i) = params.scalar_z0 * std::exp(params.history_decay * theta);
    }
    out.system.initial_state = std::move(z0);

    out.modes.modes = m >= 2 ? std::vector<int>{0, 1} : std::vector<int>{0};
    out.schedule = validate_schedule(
        m >= 2 ? std::vector<double>{0.5 * horizon} : std::vector<double>{}, horizon);
    return out;
}

Scenario build_transport_diffusion(const ScenarioParams& params) {
    if (params.grid_n < 16) throw Error(ErrorCode::BadParams, "grid size must be at least 16");
    if (params.domain_length <= 0.0 || params.diffusivity <= 0.0 ||
        params.gaussian_width <= 0.0) {
        throw Error(ErrorCode::BadParams, "transport-diffusion parameters must be positive");
    }
    const double horizon = resolved_horizon(params);
    const int n = params.grid_n;
    const double dx = params.domain_length / n;

    Scenario out;
    out.system.state_dim = n;
    out.system.horizon = horizon;

    ModeSpec transport;
    transport.generator = periodic_first_difference(n, dx);
    if (params.include_growth) transport.nonlinearity = Nonlinearity::cubic(0.0, 1.0, 0.0, 0.0);
    transport.stepper = StepperKind::ExponentialSplitting;
    out.system.modes.push_back(std::move(transport));

    ModeSpec diffusion;
    diffusion.generator = params.diffusivity * periodic_second_difference(n, dx);
    diffusion.stepper = StepperKind::ExponentialSplitting;
    out.system.modes.push_back(std::move(diffusion));

    out.system.resets[{0, 1}] = ResetMap::identity();
    out.system.resets[{1, 0}] = ResetMap::identity();

    // Terminal phi(z) = 0.5 h sum z_i^2, the grid-weighted L2 norm.
    out.system.cost.terminal = QuadraticCost::pure_quadratic(dx * Matrix::Identity(n, n));

    Vector z0(n);
    const double center = 0.5 * params.domain_length;
    for (int i = 0; i < n; ++i) {
        const double x = i * dx - center;
        double v = std::exp(-x * x / (2.0 * params.gaussian_width * params.gaussian_width));
        if (params.profile == InitialProfile::Wavepacket) {
            v *= std::cos(6.0 * M_PI * x / params.domain_length);
        }
        z0(i) = v;
    }
    out.system.initial_state = std::move(z0);

    out.modes.modes = {0, 1};
    out.schedule = validate_schedule({0.5 * horizon}, horizon);
    out.recommended.h_max = horizon / 500.0;
    return out;
}

}  // namespace

Scenario build_scenario(const ScenarioParams& params) {
    Scenario out;
    switch (params.name) {
        case ScenarioName::ScalarLinear: out = build_scalar_linear(params); break;
        case ScenarioName::OdePlanar: out = build_ode_planar(params); break;
        case ScenarioName::DdeChain: out = build_dde_chain(params); break;
        case ScenarioName::TransportDiffusion: out = build_transport_diffusion(params); break;
    }
    out.system.validate();
    validate_problem(out.system, out.modes, out.schedule);
    return out;
}

}  // namespace switchopt
