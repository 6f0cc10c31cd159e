#include "switchopt/registry.hpp"

namespace switchopt {

const char* to_string(NonlinearityKind kind) {
    switch (kind) {
        case NonlinearityKind::Zero: return "zero";
        case NonlinearityKind::Linear: return "linear";
        case NonlinearityKind::Cubic: return "cubic";
        case NonlinearityKind::Logistic: return "logistic";
    }
    return "zero";
}

NonlinearityKind nonlinearity_kind_from_string(const std::string& name) {
    if (name == "zero") return NonlinearityKind::Zero;
    if (name == "linear") return NonlinearityKind::Linear;
    if (name == "cubic") return NonlinearityKind::Cubic;
    if (name == "logistic") return NonlinearityKind::Logistic;
    throw Error(ErrorCode::ConfigError, "unknown nonlinearity kind '" + name + "'");
}

Vector Nonlinearity::value(double t, const Vector& z) const {
    (void)t;  // registry entries are autonomous; t stays in the signature for the model contract
    switch (kind) {
        case NonlinearityKind::Zero:
            return Vector::Zero(z.size());
        case NonlinearityKind::Linear: {
            Vector out = coeff * z;
            if (offset.size() > 0) out += offset;
            return out;
        }
        case NonlinearityKind::Cubic: {
            const auto za = z.array();
            return (c3 * za.cube() + c2 * za.square() + c1 * za + c0).matrix();
        }
        case NonlinearityKind::Logistic:
            return (rate * z.array() * (1.0 - z.array() / capacity)).matrix();
    }
    return Vector::Zero(z.size());
}

Matrix Nonlinearity::jacobian(double t, const Vector& z) const {
    (void)t;
    const auto n = z.size();
    switch (kind) {
        case NonlinearityKind::Zero:
            return Matrix::Zero(n, n);
        case NonlinearityKind::Linear:
            return coeff;
        case NonlinearityKind::Cubic:
            return (3.0 * c3 * z.array().square() + 2.0 * c2 * z.array() + c1)
                .matrix()
                .asDiagonal();
        case NonlinearityKind::Logistic:
            return (rate * (1.0 - 2.0 * z.array() / capacity)).matrix().asDiagonal();
    }
    return Matrix::Zero(n, n);
}

Nonlinearity Nonlinearity::zero() { return {}; }

Nonlinearity Nonlinearity::linear(Matrix coeff, Vector offset) {
    Nonlinearity f;
    f.kind = NonlinearityKind::Linear;
    f.coeff = std::move(coeff);
    f.offset = std::move(offset);
    return f;
}

Nonlinearity Nonlinearity::cubic(double c0, double c1, double c2, double c3) {
    Nonlinearity f;
    f.kind = NonlinearityKind::Cubic;
    f.c0 = c0;
    f.c1 = c1;
    f.c2 = c2;
    f.c3 = c3;
    return f;
}

Nonlinearity Nonlinearity::logistic(double rate, double capacity) {
    Nonlinearity f;
    f.kind = NonlinearityKind::Logistic;
    f.rate = rate;
    f.capacity = capacity;
    return f;
}

const char* to_string(ResetKind kind) {
    switch (kind) {
        case ResetKind::Identity: return "identity";
        case ResetKind::Affine: return "affine";
        case ResetKind::Cubic: return "cubic";
    }
    return "identity";
}

ResetKind reset_kind_from_string(const std::string& name) {
    if (name == "identity") return ResetKind::Identity;
    if (name == "affine") return ResetKind::Affine;
    if (name == "cubic") return ResetKind::Cubic;
    throw Error(ErrorCode::ConfigError, "unknown reset kind '" + name + "'");
}

Vector ResetMap::apply(const Vector& z) const {
    switch (kind) {
        case ResetKind::Identity:
            return z;
        case ResetKind::Affine: {
            Vector out = scale * z;
            if (offset.size() > 0) out += offset;
            return out;
        }
        case ResetKind::Cubic:
            return (z.array() + gain * z.array().cube()).matrix();
    }
    return z;
}

Matrix ResetMap::jacobian(const Vector& z) const {
    const auto n = z.size();
    switch (kind) {
        case ResetKind::Identity:
            return Matrix::Identity(n, n);
        case ResetKind::Affine:
            return scale;
        case ResetKind::Cubic:
            return (1.0 + 3.0 * gain * z.array().square()).matrix().asDiagonal();
    }
    return Matrix::Identity(n, n);
}

ResetMap ResetMap::identity() { return {}; }

ResetMap ResetMap::affine(Matrix scale, Vector offset) {
    ResetMap g;
    g.kind = ResetKind::Affine;
    g.scale = std::move(scale);
    g.offset = std::move(offset);
    return g;
}

ResetMap ResetMap::cubic(double gain) {
    ResetMap g;
    g.kind = ResetKind::Cubic;
    g.gain = gain;
    return g;
}

double QuadraticCost::value(double t, const Vector& z) const {
    double v = constant + time_slope * t;
    if (linear.size() > 0) v += linear.dot(z);
    if (quadratic.size() > 0) v += 0.5 * z.dot(quadratic * z);
    return v;
}

Vector QuadraticCost::grad_z(const Vector& z) const {
    Vector g = Vector::Zero(z.size());
    if (linear.size() > 0) g += linear;
    if (quadratic.size() > 0) g += 0.5 * (quadratic * z + quadratic.transpose() * z);
    return g;
}

bool QuadraticCost::is_zero() const {
    return constant == 0.0 && time_slope == 0.0 &&
           (linear.size() == 0 || linear.isZero(0.0)) &&
           (quadratic.size() == 0 || quadratic.isZero(0.0));
}

QuadraticCost QuadraticCost::constant_cost(double c) {
    QuadraticCost l;
    l.constant = c;
    return l;
}

QuadraticCost QuadraticCost::time_linear(double slope) {
    QuadraticCost l;
    l.time_slope = slope;
    return l;
}

QuadraticCost QuadraticCost::pure_quadratic(Matrix q) {
    QuadraticCost l;
    l.quadratic = std::move(q);
    return l;
}

}  // namespace switchopt
