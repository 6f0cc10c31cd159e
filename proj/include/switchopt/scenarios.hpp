#pragma once

/**
 * @file scenarios.hpp
 * @brief Concrete finite-dimensional instances of the example families:
 *        scalar linear modes, planar switched linear systems, an integro-delay
 *        equation via the linear chain trick, and the periodic
 *        transport-to-diffusion problem.
 */

#include "switchopt/forward.hpp"

#include <string>

namespace switchopt {

enum class ScenarioName { ScalarLinear, OdePlanar, DdeChain, TransportDiffusion };

[[nodiscard]] const char* to_string(ScenarioName name);
[[nodiscard]] ScenarioName scenario_name_from_string(const std::string& name);

enum class InitialProfile { Gaussian, Wavepacket };

[[nodiscard]] const char* to_string(InitialProfile profile);
[[nodiscard]] InitialProfile initial_profile_from_string(const std::string& name);

struct ScenarioParams {
    ScenarioName name = ScenarioName::ScalarLinear;
    double horizon = 0.0;  ///< 0 -> scenario default

    // scalar-linear
    std::vector<double> rates = {1.0, -2.0};
    double scalar_z0 = 1.0;
    double reset_scale = 1.0;  ///< 1 -> identity resets

    // ode-planar
    bool generator_form = true;  ///< false moves the linear part into f (A = 0)

    // dde-chain
    int chain_length = 16;
    double delay = 0.5;
    std::vector<std::pair<double, double>> dde_coeffs = {{0.0, -1.0}, {0.0, -2.0}};
    double history_decay = 0.0;  ///< history phi(theta) = z0 * exp(history_decay * theta)

    // transport-diffusion
    int grid_n = 128;
    double domain_length = 20.0;
    double diffusivity = 1.0;
    double gaussian_width = 1.0;
    bool include_growth = true;  ///< f = z on the transport mode
    InitialProfile profile = InitialProfile::Gaussian;
};

/** @brief Built problem instance plus a recommended mesh. */
struct Scenario {
    HybridSystemSpec system;
    ModeSequence modes;
    SwitchingSchedule schedule;
    SolveOptions recommended;
};

[[nodiscard]] ScenarioParams default_params(ScenarioName name);

/// Throws UnknownScenario / BadParams on invalid parameters.
[[nodiscard]] Scenario build_scenario(const ScenarioParams& params);

/// Periodic central first-difference matrix on n points with spacing dx.
[[nodiscard]] Matrix periodic_first_difference(int n, double dx);

/// Periodic central second-difference matrix on n points with spacing dx.
[[nodiscard]] Matrix periodic_second_difference(int n, double dx);

}  // namespace switchopt
