#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "starspec/interp.hpp"
#include "starspec/quadrature.hpp"

using namespace starspec;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    GaussLegendre gl(8);  // exact through degree 15
    double s = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double x = gl.x[i];
        s += gl.w[i] * (5.0 * std::pow(x, 14) + x * x * x - 2.0 * x * x + 1.0);
    }
    // int_{-1}^{1} 5 x^14 - 2 x^2 + 1 = 10/15 - 4/3 + 2 = 4/3
    REQUIRE(s == Catch::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Legendre mapped interval") {
    GaussLegendre gl(16);
    std::vector<double> xs, ws;
    gl.mapped(0.0, M_PI, xs, ws);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * std::sin(xs[i]);
    REQUIRE(s == Catch::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("Hermite interpolation reproduces node values and slopes") {
    const std::size_t n = 33;
    const double h = 0.1;
    std::vector<double> f(n), df(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = h * static_cast<double>(i);
        f[i] = std::sin(x);
        df[i] = std::cos(x);
    }
    UniformHermite interp(0.0, h, f, df);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = h * static_cast<double>(i);
        REQUIRE(interp.value(x) == Catch::Approx(f[i]).margin(1e-15));
        REQUIRE(interp.deriv(x) == Catch::Approx(df[i]).margin(1e-13));
    }
    // Off-node accuracy ~ h^4 for values, ~ h^3 for slopes.
    REQUIRE(std::abs(interp.value(0.5 * h + 1.0) - std::sin(0.5 * h + 1.0)) < 1e-6);
    REQUIRE(std::abs(interp.deriv(0.5 * h + 1.0) - std::cos(0.5 * h + 1.0)) < 1e-4);
}

TEST_CASE("Complete cubic spline derivative converges at 4th order at nodes") {
    auto worst_err = [](std::size_t n) {
        const double h = 2.0 / static_cast<double>(n - 1);
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(h * static_cast<double>(i));
        CubicSpline sp(0.0, h, f, 1.0, std::exp(2.0));
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            worst = std::max(worst,
                             std::abs(sp.deriv_at_node(i) - std::exp(h * static_cast<double>(i))));
        return worst;
    };
    const double e1 = worst_err(101), e2 = worst_err(201);
    REQUIRE(e1 < 1e-6);
    REQUIRE(e1 / e2 > 12.0);  // ~2^4
}
