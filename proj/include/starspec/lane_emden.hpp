#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace starspec {

/// Solution table of theta'' + (2/xi) theta' + theta^n = 0, theta(0)=1,
/// theta'(0)=0, integrated out to the first zero xi1.
struct LaneEmdenCurve {
    double n = 0.0;
    std::vector<double> xi;
    std::vector<double> theta;
    std::vector<double> dtheta;
    double xi1 = 0.0;
};

namespace detail {

inline double le_pow(double th, double n) {
    if (th <= 0.0) return 0.0;
    return std::pow(th, n);
}

// One RK4 step of (theta, dtheta). The center singularity never reaches
// here; integration starts from a series seed at xi > 0.
inline void le_rk4_step(double n, double& xi, double& th, double& dth, double h) {
    auto f = [n](double x, double t, double d, double& dt, double& dd) {
        dt = d;
        dd = -le_pow(t, n) - 2.0 * d / x;
    };
    double k1t, k1d, k2t, k2d, k3t, k3d, k4t, k4d;
    f(xi, th, dth, k1t, k1d);
    f(xi + 0.5 * h, th + 0.5 * h * k1t, dth + 0.5 * h * k1d, k2t, k2d);
    f(xi + 0.5 * h, th + 0.5 * h * k2t, dth + 0.5 * h * k2d, k3t, k3d);
    f(xi + h, th + h * k3t, dth + h * k3d, k4t, k4d);
    th += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    dth += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    xi += h;
}

// Series expansion about the center: theta = 1 - xi^2/6 + n xi^4/120
//   - n(8n-5) xi^6/15120 + ...
inline void le_series(double n, double xi, double& th, double& dth) {
    const double x2 = xi * xi;
    th = 1.0 - x2 / 6.0 + n * x2 * x2 / 120.0 - n * (8.0 * n - 5.0) * x2 * x2 * x2 / 15120.0;
    dth = -xi / 3.0 + n * x2 * xi / 30.0 - n * (8.0 * n - 5.0) * x2 * x2 * xi / 2520.0;
}

}  // namespace detail

/// Integrate the polytrope profile with fixed step until theta changes sign,
/// then bisect the zero to 1e-10. Supported range 0 <= n < 5 (profiles with a
/// finite first zero); failure to cross by xi=50 is reported as an error.
inline LaneEmdenCurve solve_lane_emden(double n, double step) {
    if (!(n >= 0.0 && n < 5.0)) throw std::invalid_argument("solve_lane_emden: need 0 <= n < 5");
    if (!(step > 0.0) || step > 0.5)
        throw std::invalid_argument("solve_lane_emden: step must be in (0, 0.5]");

    LaneEmdenCurve c;
    c.n = n;

    double xi = step;
    double th, dth;
    detail::le_series(n, xi, th, dth);
    c.xi.push_back(0.0);
    c.theta.push_back(1.0);
    c.dtheta.push_back(0.0);
    c.xi.push_back(xi);
    c.theta.push_back(th);
    c.dtheta.push_back(dth);

    const double xi_stop = 50.0;
    double prev_xi = xi, prev_th = th, prev_dth = dth;
    bool crossed = false;
    while (xi < xi_stop) {
        prev_xi = xi;
        prev_th = th;
        prev_dth = dth;
        detail::le_rk4_step(n, xi, th, dth, step);
        if (th <= 0.0) {
            crossed = true;
            break;
        }
        c.xi.push_back(xi);
        c.theta.push_back(th);
        c.dtheta.push_back(dth);
    }
    if (!crossed)
        throw std::runtime_error("solve_lane_emden: no sign change before xi=50 (n out of range?)");

    // Bisection between the last positive and first nonpositive samples,
    // re-integrating from the stored positive state each probe.
    double lo = prev_xi, hi = xi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        double x = prev_xi, t = prev_th, d = prev_dth;
        detail::le_rk4_step(n, x, t, d, mid - prev_xi);
        if (t > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    c.xi1 = 0.5 * (lo + hi);

    // Final state at xi1 for dtheta(xi1).
    {
        double x = prev_xi, t = prev_th, d = prev_dth;
        detail::le_rk4_step(n, x, t, d, c.xi1 - prev_xi);
        c.xi.push_back(c.xi1);
        c.theta.push_back(0.0);
        c.dtheta.push_back(d);
    }
    return c;
}

/// Re-integrate the profile onto a prescribed strictly increasing xi grid
/// (grid.front() == 0, grid.back() == xi1), taking `substeps` RK4 stages per
/// grid interval. Returns (theta, dtheta) at the grid nodes; the last node is
/// forced to theta = 0.
inline void lane_emden_on_grid(double n, const std::vector<double>& grid, int substeps,
                               std::vector<double>& theta, std::vector<double>& dtheta) {
    if (grid.size() < 2 || grid.front() != 0.0)
        throw std::invalid_argument("lane_emden_on_grid: grid must start at 0");
    theta.assign(grid.size(), 0.0);
    dtheta.assign(grid.size(), 0.0);
    theta[0] = 1.0;
    dtheta[0] = 0.0;

    // Series seed at the first node; a step launched from xi << h would lose
    // integrator order against the 2 theta'/xi term.
    double xi = grid[1];
    double th, dth;
    detail::le_series(n, xi, th, dth);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double target = grid[i];
        if (i > 1) {
            const int ns = std::max(1, substeps);
            const double h = (target - xi) / ns;
            for (int k = 0; k < ns; ++k) detail::le_rk4_step(n, xi, th, dth, h);
            xi = target;  // kill accumulated round-off in the abscissa
        }
        if (i + 1 == grid.size()) {
            theta[i] = 0.0;
            dtheta[i] = dth;
        } else {
            if (th <= 0.0)
                throw std::runtime_error("lane_emden_on_grid: grid extends past the first zero");
            theta[i] = th;
            dtheta[i] = dth;
        }
    }
}

/// Max residual of (1/xi^2)(xi^2 theta')' + theta^n over interior nodes,
/// with the radial derivative taken by 4th-order central differences of the
/// stored xi^2 theta' table (independent of the integrator's own RHS).
/// Nodes with theta < 0.01 are skipped (for fractional n the higher
/// derivatives of theta^n degenerate at the zero), as are nodes with
/// xi < 0.1 xi1 (the 1/xi^2 factor amplifies stencil noise near the center);
/// in both regions the stencil stops measuring integrator error.
inline double lane_emden_ode_residual(const LaneEmdenCurve& c) {
    const std::size_t n = c.xi.size();
    if (n < 7) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 3; i + 3 < n; ++i) {
        if (c.theta[i] < 0.01 || c.xi[i] < 0.1 * c.xi1) continue;
        const double h = c.xi[i + 1] - c.xi[i];
        // Skip the irregular spacing next to the bisected endpoint.
        if (std::abs((c.xi[i + 2] - c.xi[i + 1]) - h) > 1e-12 * h) continue;
        if (std::abs((c.xi[i - 1] - c.xi[i - 2]) - h) > 1e-12 * h) continue;
        auto g = [&](std::size_t j) { return c.xi[j] * c.xi[j] * c.dtheta[j]; };
        const double d = (-g(i + 2) + 8.0 * g(i + 1) - 8.0 * g(i - 1) + g(i - 2)) / (12.0 * h);
        const double res = d / (c.xi[i] * c.xi[i]) + detail::le_pow(c.theta[i], c.n);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace starspec
