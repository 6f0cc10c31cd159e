#pragma once

/**
 * @file registry.hpp
 * @brief Closed registries of named parametric maps: mode nonlinearities,
 *        reset maps and cost terms. Every entry carries a closed-form
 *        Jacobian/gradient so sensitivity and adjoint solves never fall back
 *        to numerical differentiation.
 */

#include "switchopt/types.hpp"

namespace switchopt {

// ---------------------------------------------------------------------------
// Nonlinearities f(t, z)
// ---------------------------------------------------------------------------

enum class NonlinearityKind {
    Zero,
    Linear,   ///< f(t,z) = B z + b
    Cubic,    ///< componentwise f_i = c3 z_i^3 + c2 z_i^2 + c1 z_i + c0
    Logistic, ///< componentwise f_i = rate * z_i * (1 - z_i / capacity)
};

[[nodiscard]] const char* to_string(NonlinearityKind kind);
[[nodiscard]] NonlinearityKind nonlinearity_kind_from_string(const std::string& name);

struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::Zero;

    // Linear
    Matrix coeff;   // B, n x n
    Vector offset;  // b, size n (empty means zero)

    // Cubic
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

    // Logistic
    double rate = 0.0;
    double capacity = 1.0;

    [[nodiscard]] Vector value(double t, const Vector& z) const;
    [[nodiscard]] Matrix jacobian(double t, const Vector& z) const;
    [[nodiscard]] bool is_zero() const { return kind == NonlinearityKind::Zero; }

    static Nonlinearity zero();
    static Nonlinearity linear(Matrix coeff, Vector offset = Vector());
    static Nonlinearity cubic(double c0, double c1, double c2, double c3);
    static Nonlinearity logistic(double rate, double capacity);
};

// ---------------------------------------------------------------------------
// Reset maps g(z)
// ---------------------------------------------------------------------------

enum class ResetKind {
    Identity,
    Affine,  ///< g(z) = M z + b
    Cubic,   ///< componentwise g_i(z) = z_i + gain * z_i^3
};

[[nodiscard]] const char* to_string(ResetKind kind);
[[nodiscard]] ResetKind reset_kind_from_string(const std::string& name);

struct ResetMap {
    ResetKind kind = ResetKind::Identity;

    Matrix scale;   // affine M
    Vector offset;  // affine b (empty means zero)
    double gain = 0.0;

    [[nodiscard]] Vector apply(const Vector& z) const;
    [[nodiscard]] Matrix jacobian(const Vector& z) const;
    [[nodiscard]] bool is_identity() const { return kind == ResetKind::Identity; }

    static ResetMap identity();
    static ResetMap affine(Matrix scale, Vector offset = Vector());
    static ResetMap cubic(double gain);
};

// ---------------------------------------------------------------------------
// Cost registry
// ---------------------------------------------------------------------------

/**
 * @brief Parametric cost term c0 + ct*t + q'z + 0.5 z'Qz.
 *
 * One form covers every named cost the scenarios need (zero, constant,
 * time-linear, quadratic). Q is symmetrized inside grad_z so the gradient is
 * always the exact derivative of value().
 */
struct QuadraticCost {
    double constant = 0.0;
    double time_slope = 0.0;
    Vector linear;     // q (empty means zero)
    Matrix quadratic;  // Q (empty means zero)

    [[nodiscard]] double value(double t, const Vector& z) const;
    [[nodiscard]] Vector grad_z(const Vector& z) const;
    [[nodiscard]] double dt() const { return time_slope; }
    [[nodiscard]] bool is_zero() const;

    static QuadraticCost zero() { return {}; }
    static QuadraticCost constant_cost(double c);
    static QuadraticCost time_linear(double slope);
    static QuadraticCost pure_quadratic(Matrix q);
};

}  // namespace switchopt
