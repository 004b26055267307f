#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "starspec/interp.hpp"
#include "starspec/lane_emden.hpp"

namespace starspec {

/// Spherically symmetric hydrostatic gas sphere under P = rho^gamma exp(S/Cv),
/// tabulated on a uniform radial grid from the center to the vacuum surface.
///
/// Units are nondimensional: G = 1 and rho(0) = 1; the surface radius R is
/// derived. The slope tables (drho, dpressure, dentropy) are analytic, not
/// finite-differenced: dP/dr is the hydrostatic right-hand side -G m rho/r^2
/// and drho/dr follows from differentiating the equation of state, so the
/// value and slope tables are thermodynamically consistent at every node.
///
/// A finished model is immutable plain data; concurrent readers are safe.
struct BackgroundModel {
    double gamma = 5.0 / 3.0;  // adiabatic exponent, in (1, 2]
    double cv = 1.0;           // specific heat at constant volume
    double gconst = 1.0;       // gravitational constant (1 in model units)
    double omega = 0.0;        // rotation rate; stored, never shapes the model
    double radius = 0.0;       // surface radius R
    double entropy_amp = 0.0;  // s1 of the built-in profile S(r) = s1 (r/Rg)^2

    std::vector<double> r;         // uniform grid, r[0]=0, r[n-1]=R
    std::vector<double> rho;       // density, rho[0]=1, rho[n-1]=0
    std::vector<double> pressure;  // pressure, pressure[n-1]=0
    std::vector<double> entropy;   // specific entropy
    std::vector<double> mass;      // enclosed mass m(r)
    std::vector<double> drho;      // d rho / dr
    std::vector<double> dpressure; // d P / dr
    std::vector<double> dentropy;  // d S / dr

    std::size_t nodes() const { return r.size(); }
    double step() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
    double total_mass() const { return mass.empty() ? 0.0 : mass.back(); }
    bool isentropic() const { return entropy_amp == 0.0; }
};

enum class BuildMethod { automatic, lane_emden, shooting };

struct BackgroundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// EOS-consistent density slope: from ln P = gamma ln rho + S/Cv,
// drho = rho (dP/P - dS/Cv)/gamma. Near the surface P -> 0 and the formula
// degenerates to 0/0; the true limit is 0 for gamma < 2, which is what the
// guard returns.
inline double drho_from_eos(double gamma, double cv, double rho, double P, double dP, double dS) {
    if (P <= 0.0 || rho <= 0.0) return 0.0;
    return rho * (dP / P - dS / cv) / gamma;
}

// Hydrostatic shooting in the surface-regular variables (x, m) with
// x = P^((gamma-1)/gamma). From the equation of state,
//   rho = x^(1/(gamma-1)) exp(-S/(gamma Cv)),
// and dP/dr = -G m rho / r^2 becomes
//   dx/dr = -((gamma-1)/gamma) G m exp(-S/(gamma Cv)) / r^2,
// whose right-hand side does not involve x. Unlike P, the variable x crosses
// the vacuum boundary transversally, so the integrator keeps full order
// through the surface and the zero of x can be bisected to round-off.
struct ShootState {
    double x;
    double m;
};

template <class SFun>
inline void shoot_step(double gamma, double cv, double G, const SFun& S, double& rr,
                       ShootState& y, double h) {
    const double npoly = 1.0 / (gamma - 1.0);
    const double xfac = (gamma - 1.0) / gamma;
    auto f = [&](double r, const ShootState& s, ShootState& d) {
        const double em = std::exp(-S(r) / (gamma * cv));
        const double rho = (s.x > 0.0) ? std::pow(s.x, npoly) * em : 0.0;
        d.x = (r > 0.0) ? -xfac * G * s.m * em / (r * r) : 0.0;
        d.m = 4.0 * M_PI * r * r * rho;
    };
    ShootState k1, k2, k3, k4, t;
    f(rr, y, k1);
    t = {y.x + 0.5 * h * k1.x, y.m + 0.5 * h * k1.m};
    f(rr + 0.5 * h, t, k2);
    t = {y.x + 0.5 * h * k2.x, y.m + 0.5 * h * k2.m};
    f(rr + 0.5 * h, t, k3);
    t = {y.x + h * k3.x, y.m + h * k3.m};
    f(rr + h, t, k4);
    y.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    y.m += h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
    rr += h;
}

}  // namespace detail

/// Build a background. With entropy_amp = 0 the model is the rescaled
/// Lane-Emden polytrope with n = 1/(gamma-1); otherwise the hydrostatic
/// system is shot outward with the entropy profile S(r) = s1 (r/Rg)^2, where
/// Rg is the isentropic radius for the same gamma. `omega` is stored as a
/// formula parameter only and does not alter the spherical construction.
inline BackgroundModel build_background(double gamma, double entropy_amp, double omega,
                                        std::size_t nodes, double cv = 1.0,
                                        BuildMethod method = BuildMethod::automatic) {
    if (!(gamma > 1.0 && gamma <= 2.0))
        throw BackgroundError("build_background: gamma must be in (1, 2]");
    if (nodes < 200) throw BackgroundError("build_background: need >= 200 nodes");
    if (!(cv > 0.0)) throw BackgroundError("build_background: Cv must be positive");

    const double G = 1.0;
    const double n_poly = 1.0 / (gamma - 1.0);
    const double ascl = std::sqrt((n_poly + 1.0) / (4.0 * M_PI));  // r = ascl * xi

    if (method == BuildMethod::automatic)
        method = (entropy_amp == 0.0) ? BuildMethod::lane_emden : BuildMethod::shooting;

    BackgroundModel mod;
    mod.gamma = gamma;
    mod.cv = cv;
    mod.gconst = G;
    mod.omega = omega;
    mod.entropy_amp = entropy_amp;

    const LaneEmdenCurve le = solve_lane_emden(n_poly, 1.0 / 512.0);
    const double R_guess = ascl * le.xi1;

    if (method == BuildMethod::lane_emden) {
        if (entropy_amp != 0.0)
            throw BackgroundError("build_background: Lane-Emden path requires entropy_amp = 0");
        const double R = R_guess;
        std::vector<double> grid(nodes);
        for (std::size_t i = 0; i < nodes; ++i)
            grid[i] = le.xi1 * static_cast<double>(i) / static_cast<double>(nodes - 1);
        std::vector<double> th, dth;
        lane_emden_on_grid(n_poly, grid, 8, th, dth);

        mod.radius = R;
        mod.r.resize(nodes);
        mod.rho.resize(nodes);
        mod.pressure.resize(nodes);
        mod.entropy.assign(nodes, 0.0);
        mod.mass.resize(nodes);
        mod.drho.resize(nodes);
        mod.dpressure.resize(nodes);
        mod.dentropy.assign(nodes, 0.0);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double t = std::max(th[i], 0.0);
            mod.r[i] = ascl * grid[i];
            mod.rho[i] = detail::le_pow(t, n_poly);
            mod.pressure[i] = std::pow(mod.rho[i], gamma);
            mod.mass[i] = -4.0 * M_PI * ascl * ascl * ascl * grid[i] * grid[i] * dth[i];
            // drho = n theta^(n-1) theta' / ascl; zero at both ends.
            double dr = 0.0;
            if (t > 0.0 && i > 0) dr = n_poly * std::pow(t, n_poly - 1.0) * dth[i] / ascl;
            if (i + 1 == nodes && n_poly == 1.0) dr = dth[i] / ascl;  // gamma = 2 edge
            mod.drho[i] = dr;
            mod.dpressure[i] =
                (i == 0) ? 0.0 : -G * mod.mass[i] * mod.rho[i] / (mod.r[i] * mod.r[i]);
        }
        mod.mass[0] = 0.0;
        return mod;
    }

    // Shooting path.
    auto S = [entropy_amp, R_guess](double r) {
        const double x = r / R_guess;
        return entropy_amp * x * x;
    };
    auto dS = [entropy_amp, R_guess](double r) { return 2.0 * entropy_amp * r / (R_guess * R_guess); };

    // Center series through O(r^4): with rho = 1 + a r^2, P = 1 + b r^2 + p4 r^4,
    // m = (4 pi/3) r^3 + (4 pi/5) a r^5, hydrostatic balance and the equation
    // of state give b = -(2 pi/3) G, a = (b - S''(0)/(2 Cv)) / gamma,
    // p4 = -(8 pi/15) G a. Seeding at the first grid node (never integrating
    // across the origin) keeps the integrator at full order: a step launched
    // from r << h cannot resolve m ~ r^3 and degrades to O(h^2) globally.
    const double xexp = (gamma - 1.0) / gamma;
    const double ser_b = -(2.0 * M_PI / 3.0) * G;
    const double ser_a = (ser_b - entropy_amp / (R_guess * R_guess * cv)) / gamma;
    const double ser_p4 = -(8.0 * M_PI / 15.0) * G * ser_a;
    auto seed = [&](double r0) {
        detail::ShootState y;
        const double P0 = 1.0 + ser_b * r0 * r0 + ser_p4 * r0 * r0 * r0 * r0;
        y.x = std::pow(P0, xexp);
        y.m = 4.0 * M_PI / 3.0 * r0 * r0 * r0 + 4.0 * M_PI / 5.0 * ser_a * std::pow(r0, 5);
        return y;
    };

    const double h1 = R_guess / 8192.0;
    const double r_seed = 64.0 * h1;
    double rr = r_seed;
    detail::ShootState y = seed(r_seed);
    double prev_r = rr;
    detail::ShootState prev_y = y;
    bool surfaced = false;
    while (rr < 30.0 * R_guess) {
        prev_r = rr;
        prev_y = y;
        detail::shoot_step(gamma, cv, G, S, rr, y, h1);
        if (y.x <= 0.0) {
            surfaced = true;
            break;
        }
    }
    if (!surfaced)
        throw BackgroundError(
            "build_background: pressure never reached the surface (unbound profile)");
    // Bisect the in-step crossing, then polish with one secant-style
    // extrapolation using the regular slope of x.
    double lo = prev_r, hi = rr;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * R_guess; ++it) {
        const double mid = 0.5 * (lo + hi);
        double xr = prev_r;
        detail::ShootState t = prev_y;
        detail::shoot_step(gamma, cv, G, S, xr, t, mid - prev_r);
        if (t.x > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double R = 0.5 * (lo + hi);
    if (!(R > 0.0) || !std::isfinite(R))
        throw BackgroundError("build_background: surface location failed");

    // Phase 2: integrate on the uniform node grid with fixed substeps.
    const int substeps = 8;
    mod.radius = R;
    mod.r.resize(nodes);
    mod.rho.resize(nodes);
    mod.pressure.resize(nodes);
    mod.entropy.resize(nodes);
    mod.mass.resize(nodes);
    mod.drho.resize(nodes);
    mod.dpressure.resize(nodes);
    mod.dentropy.resize(nodes);

    const double h = R / static_cast<double>(nodes - 1);
    mod.r[0] = 0.0;
    mod.rho[0] = 1.0;
    mod.pressure[0] = 1.0;
    mod.entropy[0] = 0.0;
    mod.mass[0] = 0.0;
    mod.drho[0] = 0.0;
    mod.dpressure[0] = 0.0;
    mod.dentropy[0] = 0.0;
    rr = h;  // series seed at the first node
    y = seed(h);
    for (std::size_t i = 1; i < nodes; ++i) {
        const double ri = (i + 1 == nodes) ? R : h * static_cast<double>(i);
        if (i > 1) {
            const double hs = (ri - rr) / substeps;
            for (int k = 0; k < substeps; ++k) detail::shoot_step(gamma, cv, G, S, rr, y, hs);
            rr = ri;
        }
        mod.r[i] = ri;
        if (i + 1 == nodes) {
            mod.pressure[i] = 0.0;
            mod.rho[i] = 0.0;
            mod.entropy[i] = S(R);
            mod.mass[i] = y.m;
            mod.drho[i] = 0.0;
            mod.dpressure[i] = 0.0;
            mod.dentropy[i] = dS(R);
            break;
        }
        if (y.x <= 0.0)
            throw BackgroundError("build_background: pressure crossed zero inside the grid");
        const double Si = S(ri);
        const double Pi = std::pow(y.x, 1.0 / xexp);
        const double rhoi = std::pow(y.x, n_poly) * std::exp(-Si / (gamma * cv));
        mod.pressure[i] = Pi;
        mod.rho[i] = rhoi;
        mod.entropy[i] = Si;
        mod.mass[i] = y.m;
        mod.dpressure[i] = -G * y.m * rhoi / (ri * ri);
        mod.dentropy[i] = dS(ri);
        mod.drho[i] = detail::drho_from_eos(gamma, cv, rhoi, Pi, mod.dpressure[i], mod.dentropy[i]);
    }
    return mod;
}

/// Rescale a model to the canonical units G = 1, rho(0) = 1, S(0) = 0.
/// A model already in canonical units comes back bit-identical.
inline BackgroundModel normalized(const BackgroundModel& m) {
    if (m.rho.empty()) throw BackgroundError("normalized: empty model");
    const double A = m.rho[0];                       // density scale
    const double Pc = m.pressure[0];                 // central pressure
    const double B = std::sqrt(Pc / (m.gconst * A * A));  // length scale
    const double S0 = m.entropy[0];
    const double tinv = std::sqrt(m.gconst * A);  // inverse time scale
    BackgroundModel out = m;
    out.gconst = 1.0;
    out.omega = m.omega / tinv;
    out.radius = m.radius / B;
    const double mscale = A * B * B * B;
    for (std::size_t i = 0; i < m.r.size(); ++i) {
        out.r[i] = m.r[i] / B;
        out.rho[i] = m.rho[i] / A;
        out.pressure[i] = m.pressure[i] / Pc;
        out.entropy[i] = m.entropy[i] - S0;
        out.mass[i] = m.mass[i] / mscale;
        out.drho[i] = m.drho[i] * B / A;
        out.dpressure[i] = m.dpressure[i] * B / Pc;
        out.dentropy[i] = m.dentropy[i] * B;
    }
    return out;
}

/// Residuals and surface diagnostics of a model. The hydrostatic residual is
/// measured against a complete-cubic-spline derivative of the pressure table,
/// an independent route from the stored analytic slopes.
struct ValidationReport {
    double eos_max_residual = 0.0;          // relative
    double hydrostatic_max_residual = 0.0;  // scaled by P_c / R
    double surface_exponent_fit = 0.0;      // power of rho in the boundary distance
    double pressure_exponent_fit = 0.0;     // power of P in the boundary distance
    double dc2dn_surface = 0.0;             // outward derivative of c^2 at the surface
    double center_concavity_min = 0.0;      // inf over r < r0 of -(1/r) drho/dr
    bool gamma_edge_case = false;           // gamma == 2 analytic-oracle configuration
    bool formula_evaluation_mode = false;   // omega != 0 with spherical fields
    std::map<std::string, bool> passed;

    bool all_passed() const {
        for (const auto& [k, v] : passed)
            if (!v) return false;
        return true;
    }
};

struct ValidationTolerances {
    double eos = 1e-12;
    double hydrostatic = 1e-8;
    double exponent_window = 0.05;
};

inline ValidationReport validate_background(const BackgroundModel& m,
                                            ValidationTolerances tol = {}) {
    ValidationReport rep;
    const std::size_t n = m.nodes();
    if (n < 8) throw BackgroundError("validate_background: model too small");
    const double R = m.radius;
    const double Pc = m.pressure[0];

    rep.gamma_edge_case = (m.gamma == 2.0);
    rep.formula_evaluation_mode = (m.omega != 0.0);

    // Equation of state, every node.
    for (std::size_t i = 0; i < n; ++i) {
        const double lhs = m.pressure[i];
        const double rhs = std::pow(m.rho[i], m.gamma) * std::exp(m.entropy[i] / m.cv);
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        rep.eos_max_residual = std::max(rep.eos_max_residual, std::abs(lhs - rhs) / scale);
    }

    // Hydrostatic balance at interior nodes, spline-derivative route. The
    // surface layer d < 0.002 R is skipped: P ~ d^(gamma/(gamma-1)) there, so
    // the spline's own truncation error diverges and stops measuring the
    // tables. Same exclusion convention as field sampling.
    {
        CubicSpline sp(0.0, m.step(), m.pressure, m.dpressure.front(), m.dpressure.back());
        const double scale = Pc / R;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (R - m.r[i] < 0.002 * R) break;
            const double lhs = sp.deriv_at_node(i);
            const double rhs = -m.gconst * m.mass[i] * m.rho[i] / (m.r[i] * m.r[i]);
            rep.hydrostatic_max_residual =
                std::max(rep.hydrostatic_max_residual, std::abs(lhs - rhs) / scale);
        }
    }

    // Surface power laws: log-log fit of rho and P against d = R - r over the
    // outer decade d in [0.003 R, 0.03 R].
    auto fit_exponent = [&](const std::vector<double>& f) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = R - m.r[i];
            if (d < 0.003 * R || d > 0.03 * R || f[i] <= 0.0) continue;
            const double x = std::log(d), yv = std::log(f[i]);
            sx += x;
            sy += yv;
            sxx += x * x;
            sxy += x * yv;
            ++cnt;
        }
        if (cnt < 4) return 0.0;
        const double c = static_cast<double>(cnt);
        return (c * sxy - sx * sy) / (c * sxx - sx * sx);
    };
    rep.surface_exponent_fit = fit_exponent(m.rho);
    rep.pressure_exponent_fit = fit_exponent(m.pressure);

    // Outward derivative of c^2 = gamma P / rho at the surface: linear fit of
    // c^2 against d over the same window, reported as d/dn = -d/dd.
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double d = R - m.r[i];
            if (d < 0.001 * R || d > 0.02 * R || m.rho[i] <= 0.0) continue;
            const double c2 = m.gamma * m.pressure[i] / m.rho[i];
            sx += d;
            sy += c2;
            sxx += d * d;
            sxy += d * c2;
            ++cnt;
        }
        if (cnt >= 4) {
            const double c = static_cast<double>(cnt);
            const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
            rep.dc2dn_surface = -slope;
        }
    }

    // Near-center concavity inf(-(1/r) drho/dr) over r < 0.1 R.
    {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < n; ++i) {
            if (m.r[i] > 0.1 * R) break;
            worst = std::min(worst, -m.drho[i] / m.r[i]);
        }
        rep.center_concavity_min = worst;
    }

    // Strict decrease of rho over the outer half.
    bool decreasing = true;
    for (std::size_t i = n / 2; i + 1 < n; ++i)
        if (!(m.rho[i + 1] < m.rho[i])) decreasing = false;

    const double exp_expect = 1.0 / (m.gamma - 1.0);
    rep.passed["eos"] = rep.eos_max_residual <= tol.eos;
    rep.passed["hydrostatic"] = rep.hydrostatic_max_residual <= tol.hydrostatic;
    rep.passed["surface_exponent"] =
        std::abs(rep.surface_exponent_fit - exp_expect) <= tol.exponent_window;
    rep.passed["pressure_exponent"] =
        std::abs(rep.pressure_exponent_fit - (1.0 + exp_expect)) <= 2.0 * tol.exponent_window;
    rep.passed["dc2dn_negative"] = rep.dc2dn_surface < 0.0;
    rep.passed["center_concavity"] = rep.center_concavity_min > 0.0;
    rep.passed["rho_decreasing_outer"] = decreasing;
    return rep;
}

}  // namespace starspec
