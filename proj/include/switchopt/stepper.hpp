#pragma once

/**
 * @file stepper.hpp
 * @brief Fixed-step semilinear integrators shared by the forward, adjoint and
 *        variational passes. Header-only so each pass can supply its own
 *        nonlinearity callable without type erasure.
 */

#include "switchopt/forward.hpp"
#include "switchopt/types.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>
#include <utility>

namespace switchopt::detail {

inline void check_state(const Vector& z, double t, int interval, double blowup_limit) {
    if (!z.allFinite()) {
        throw Error(ErrorCode::NonFiniteState, "non-finite state at t = " + std::to_string(t) +
                                                   " (interval " + std::to_string(interval) + ")");
    }
    const double norm = z.norm();
    if (norm > blowup_limit) {
        throw Error(ErrorCode::BlowUp, "state norm " + std::to_string(norm) +
                                           " exceeds blow-up bound " +
                                           std::to_string(blowup_limit) + " at t = " +
                                           std::to_string(t) + " (interval " +
                                           std::to_string(interval) + ")");
    }
}

/**
 * Integrates dz/dt = G z + f(t, z) over [t_start, t_end] with equal steps of
 * count ceil(span / h_max). `f` is any callable (double, const Vector&) ->
 * Vector. Returns a dense segment with derivatives of the full right-hand
 * side at every knot.
 */
template <class Nonlin>
DenseSegment integrate_semilinear(const Matrix& generator, Nonlin&& f, StepperKind stepper,
                                  const Vector& z_init, double t_start, double t_end,
                                  const StepControl& control, int interval, int mode_index) {
    DenseSegment seg;
    seg.interval = interval;
    seg.mode = mode_index;
    seg.t_start = t_start;
    seg.t_end = t_end;

    auto full_rhs = [&](double t, const Vector& z) -> Vector {
        return generator * z + f(t, z);
    };

    check_state(z_init, t_start, interval, control.blowup_limit);
    seg.knots.push_back(t_start);
    seg.values.push_back(z_init);
    seg.derivatives.push_back(full_rhs(t_start, z_init));
    if (t_end <= t_start) return seg;  // degenerate interval, single knot

    const double span = t_end - t_start;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / control.h_max)));
    const double h = span / steps;

    seg.knots.reserve(static_cast<std::size_t>(steps) + 1);
    seg.values.reserve(static_cast<std::size_t>(steps) + 1);
    seg.derivatives.reserve(static_cast<std::size_t>(steps) + 1);

    Matrix half_exp;
    if (stepper == StepperKind::ExponentialSplitting) {
        half_exp = (0.5 * h * generator).exp();
    }

    Vector z = z_init;
    for (int m = 0; m < steps; ++m) {
        const double t = t_start + m * h;
        if (stepper == StepperKind::RungeKutta4) {
            const Vector k1 = full_rhs(t, z);
            const Vector k2 = full_rhs(t + 0.5 * h, z + 0.5 * h * k1);
            const Vector k3 = full_rhs(t + 0.5 * h, z + 0.5 * h * k2);
            const Vector k4 = full_rhs(t + h, z + h * k3);
            z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // Strang: half exponential, explicit midpoint on the nonlinearity,
            // half exponential.
            Vector za = half_exp * z;
            const Vector u1 = f(t, za);
            const Vector u2 = f(t + 0.5 * h, za + 0.5 * h * u1);
            za += h * u2;
            z = half_exp * za;
        }
        const double t_next = (m + 1 == steps) ? t_end : t_start + (m + 1) * h;
        check_state(z, t_next, interval, control.blowup_limit);
        seg.knots.push_back(t_next);
        seg.values.push_back(z);
        seg.derivatives.push_back(full_rhs(t_next, z));
    }
    return seg;
}

}  // namespace switchopt::detail
