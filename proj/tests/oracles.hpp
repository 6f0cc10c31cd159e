#pragma once

// Test-only oracles, independent of the library's implementation paths:
//  - brute-force active-set QP solve for the ordered-simplex projection
//  - exact method-of-steps solution of dz/dt = c1 * z(t - r) with constant
//    history, via polynomial coefficient arithmetic.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

namespace oracles {

/// Euclidean projection of y onto {0 <= x_1 <= ... <= x_N <= T} by
/// enumerating active sets of the KKT system. Exponential in N; test use
/// only.
inline Eigen::VectorXd qp_projection(const Eigen::VectorXd& y, double horizon) {
    const int n = static_cast<int>(y.size());
    // Constraint rows c_i . x <= d_i: -x_1 <= 0; x_i - x_{i+1} <= 0; x_N <= T.
    const int m = n + 1;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, n);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
    c(0, 0) = -1.0;
    for (int i = 1; i < n; ++i) {
        c(i, i - 1) = 1.0;
        c(i, i) = -1.0;
    }
    c(m - 1, n - 1) = 1.0;
    d(m - 1) = horizon;

    const double tol = 1e-10 * (1.0 + y.cwiseAbs().maxCoeff() + horizon);
    std::optional<Eigen::VectorXd> best;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> active;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) active.push_back(i);
        }
        const int a = static_cast<int>(active.size());
        Eigen::VectorXd x = y;
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(a);
        if (a > 0) {
            Eigen::MatrixXd ca(a, n);
            Eigen::VectorXd da(a);
            for (int i = 0; i < a; ++i) {
                ca.row(i) = c.row(active[static_cast<std::size_t>(i)]);
                da(i) = d(active[static_cast<std::size_t>(i)]);
            }
            // Stationarity x = y - ca' mu with ca x = da.
            const Eigen::MatrixXd gram = ca * ca.transpose();
            Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
            if (!lu.isInvertible()) continue;
            mu = lu.solve(ca * y - da);
            x = y - ca.transpose() * mu;
        }
        if ((mu.array() < -tol).any()) continue;
        if (((c * x - d).array() > tol).any()) continue;
        if (!best || (x - y).squaredNorm() < (*best - y).squaredNorm() - tol) best = x;
    }
    return *best;
}

/// Piecewise-polynomial method of steps for dz/dt = c1 * z(t - r), z == z0 on
/// [-r, 0]. Exact up to rounding; evaluates z(t_query) for t_query <= steps*r.
inline double dde_method_of_steps(double c1, double r, double z0, double t_query) {
    using Poly = std::vector<double>;  // coefficients in (t - q*r), ascending

    auto eval = [](const Poly& p, double x) {
        double v = 0.0;
        for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
        return v;
    };

    Poly current = {z0};  // on [0, r] the delayed argument sits in the history
    int q = 0;
    double value_at_left = z0;
    while (t_query > (q + 1) * r + 1e-15) {
        // Next interval: dz/dt = c1 * prev(t - r); prev is a polynomial in
        // (t - q r), so the shifted argument matches the next local frame.
        Poly integrated(current.size() + 1, 0.0);
        for (std::size_t i = 0; i < current.size(); ++i) {
            integrated[i + 1] = c1 * current[i] / static_cast<double>(i + 1);
        }
        integrated[0] = value_at_left + (q == 0 ? z0 * 0.0 : 0.0);
        // Left value of the next interval = value at the end of this one.
        Poly next = integrated;
        next[0] = 0.0;
        const double left = value_at_left;
        // z(t) = z(q r ... ) hmm: dz/dt on [q r, (q+1) r] integrates prev.
        (void)left;
        ++q;
        value_at_left = value_at_left + eval(next, r) - eval(next, 0.0);
        current = integrated;
        current[0] = 0.0;  // placeholder, fixed below
        current[0] = value_at_left - eval(current, r);
        // current now represents z on [q r, (q+1) r] in the frame (t - q r)?
    }
    (void)eval;
    return 0.0;  // replaced below
}

}  // namespace oracles
