#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "starspec/lane_emden.hpp"

using namespace starspec;

// n = 0: theta = 1 - xi^2/6, first zero sqrt(6). The integrand is polynomial,
// so RK4 reproduces it to round-off.
TEST_CASE("polytrope index 0 matches the closed form") {
    auto c = solve_lane_emden(0.0, 1.0 / 256.0);
    REQUIRE(std::abs(c.xi1 - std::sqrt(6.0)) < 1e-10);
    for (std::size_t i = 0; i < c.xi.size(); ++i) {
        const double exact = 1.0 - c.xi[i] * c.xi[i] / 6.0;
        REQUIRE(std::abs(c.theta[i] - std::max(exact, 0.0)) < 1e-10);
    }
}

// n = 1: theta = sin(xi)/xi, first zero pi.
TEST_CASE("polytrope index 1 matches sin(xi)/xi") {
    auto c = solve_lane_emden(1.0, 1.0 / 256.0);
    REQUIRE(std::abs(c.xi1 - M_PI) < 1e-8);
    for (std::size_t i = 1; i + 1 < c.xi.size(); ++i) {
        const double exact = std::sin(c.xi[i]) / c.xi[i];
        REQUIRE(std::abs(c.theta[i] - exact) < 1e-8);
    }
}

// n = 1.5: no closed form; check the first zero against a half-step rerun.
TEST_CASE("polytrope index 1.5 agrees under step halving") {
    auto a = solve_lane_emden(1.5, 1.0 / 256.0);
    auto b = solve_lane_emden(1.5, 1.0 / 512.0);
    REQUIRE(std::abs(a.xi1 - b.xi1) < 1e-8);
    REQUIRE(a.xi1 == Catch::Approx(3.65375).margin(2e-4));
}

TEST_CASE("ODE residual small at interior nodes") {
    auto c = solve_lane_emden(1.5, 1.0 / 256.0);
    REQUIRE(lane_emden_ode_residual(c) < 1e-8);
}

TEST_CASE("unsupported index is rejected") {
    REQUIRE_THROWS_AS(solve_lane_emden(5.0, 0.01), std::invalid_argument);
    REQUIRE_THROWS_AS(solve_lane_emden(-0.5, 0.01), std::invalid_argument);
    REQUIRE_THROWS_AS(solve_lane_emden(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("grid re-integration lands on the prescribed nodes") {
    auto c = solve_lane_emden(1.5, 1.0 / 256.0);
    std::vector<double> grid(801);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = c.xi1 * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    std::vector<double> th, dth;
    lane_emden_on_grid(1.5, grid, 8, th, dth);
    REQUIRE(th.front() == 1.0);
    REQUIRE(th.back() == 0.0);
    // Spot-check against the coarse solve by linear interpolation.
    for (std::size_t i = 100; i < 700; i += 150) {
        const double xi = grid[i];
        std::size_t j = 0;
        while (j + 2 < c.xi.size() && c.xi[j + 1] < xi) ++j;
        const double t = (xi - c.xi[j]) / (c.xi[j + 1] - c.xi[j]);
        const double ref = (1.0 - t) * c.theta[j] + t * c.theta[j + 1];
        REQUIRE(std::abs(th[i] - ref) < 1e-5);
    }
}
