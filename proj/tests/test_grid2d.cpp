#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "frankdefect/grid2d.hpp"
#include "frankdefect/profile.hpp"

using namespace frankdefect;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid nodes stay inside the open domain with r = 1 on the boundary") {
    auto grid = Grid2D::make(24, 40);
    CHECK(grid->nr() == 24);
    CHECK(grid->nt() == 40);
    for (std::size_t i = 0; i < grid->nr(); ++i) {
        CHECK(grid->r_nodes()[i] > 0.0);
        CHECK(grid->r_nodes()[i] <= 1.0);
        if (i) CHECK(grid->r_nodes()[i] > grid->r_nodes()[i - 1]);
        CHECK(grid->r_weights()[i] > 0.0);
    }
    CHECK(grid->r_nodes().back() == 1.0);
    for (std::size_t i = 0; i < grid->nt(); ++i) {
        CHECK(grid->theta_nodes()[i] > 0.0);
        CHECK(grid->theta_nodes()[i] < kPi);
        if (i) CHECK(grid->theta_nodes()[i] > grid->theta_nodes()[i - 1]);
        CHECK(grid->theta_weights()[i] > 0.0);
    }
}

TEST_CASE("volume mass integrates r^2 sin(theta) to 2/3") {
    auto grid = Grid2D::make(16, 24);
    CHECK(std::abs(grid->mass() - 2.0 / 3.0) < 1e-13);
}

TEST_CASE("boundary trace walks the r = 1 row in theta order") {
    auto grid = Grid2D::make(8, 12);
    auto trace = grid->boundary_trace();
    REQUIRE(trace.size() == grid->nt());
    for (std::size_t it = 0; it < trace.size(); ++it) {
        CHECK(trace[it] == grid->index(grid->nr() - 1, it));
        CHECK(grid->r_nodes()[trace[it] / grid->nt()] == 1.0);
    }
}

TEST_CASE("spectral partials are exact on polynomials and spectral on smooth data") {
    auto grid = Grid2D::make(20, 32);
    Field2D f = Field2D::from_function(
        grid, [](double r, double th) { return r * r * r * std::sin(2.0 * th); });
    double worst_r = 0.0, worst_t = 0.0;
    for (std::size_t ir = 0; ir < grid->nr(); ++ir)
        for (std::size_t it = 0; it < grid->nt(); ++it) {
            double r = grid->r_nodes()[ir], th = grid->theta_nodes()[it];
            std::size_t i = grid->index(ir, it);
            worst_r = std::max(worst_r, std::abs(f.dr()[i] - 3.0 * r * r * std::sin(2.0 * th)));
            worst_t = std::max(worst_t, std::abs(f.dtheta()[i] - 2.0 * r * r * r * std::cos(2.0 * th)));
        }
    CHECK(worst_r < 1e-10);
    CHECK(worst_t < 1e-9);
}

TEST_CASE("quadrature weights integrate a separable smooth function accurately") {
    auto grid = Grid2D::make(24, 48);
    // integral of exp(r) r^2 dr on (0,1) = e - 2; integral of sin^3 on (0,pi) = 4/3
    double acc = 0.0;
    for (std::size_t ir = 0; ir < grid->nr(); ++ir)
        for (std::size_t it = 0; it < grid->nt(); ++it) {
            double r = grid->r_nodes()[ir], th = grid->theta_nodes()[it];
            double s = std::sin(th);
            acc += grid->weight(ir, it) * std::exp(r) * r * r * s * s * s;
        }
    CHECK(std::abs(acc - (std::exp(1.0) - 2.0) * 4.0 / 3.0) < 1e-13);
}

TEST_CASE("profile-backed fields are r-independent with solver-grade theta derivatives") {
    ProfileSolution sol = solve_profile(2.0, 1.0, 1.0);
    auto grid = Grid2D::make(12, 64);
    Field2D f = Field2D::from_profile(grid, sol);
    for (std::size_t it = 0; it < grid->nt(); ++it) {
        double th = grid->theta_nodes()[it];
        double v = f.value(0, it);
        CHECK(std::abs(v - sol.psi_at(th)) < 1e-14);
        for (std::size_t ir = 1; ir < grid->nr(); ++ir) CHECK(f.value(ir, it) == v);
        CHECK(f.dr()[grid->index(3, it)] == 0.0);
        CHECK(std::abs(f.dtheta()[grid->index(3, it)] - sol.psi_prime_at(th)) < 1e-14);
    }
}

TEST_CASE("add_scaled combines values and cached partials") {
    auto grid = Grid2D::make(10, 14);
    Field2D a = Field2D::from_function(grid, [](double r, double th) { return r + th; });
    Field2D b = Field2D::from_callables(
        grid, [](double r, double th) { return r * th; }, [](double, double th) { return th; },
        [](double r, double) { return r; });
    a.add_scaled(b, -2.0);
    for (std::size_t ir = 0; ir < grid->nr(); ir += 3)
        for (std::size_t it = 0; it < grid->nt(); it += 5) {
            double r = grid->r_nodes()[ir], th = grid->theta_nodes()[it];
            std::size_t i = grid->index(ir, it);
            CHECK(std::abs(a.values()[i] - (r + th - 2.0 * r * th)) < 1e-13);
            CHECK(std::abs(a.dr()[i] - (1.0 - 2.0 * th)) < 1e-9);
            CHECK(std::abs(a.dtheta()[i] - (1.0 - 2.0 * r)) < 1e-9);
        }
    auto other = Grid2D::make(10, 14);
    Field2D c = Field2D::from_function(other, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(a.add_scaled(c, 1.0), std::invalid_argument);
}

TEST_CASE("degenerate grid sizes are rejected") {
    CHECK_THROWS_AS(Grid2D::make(1, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D::make(8, 0), std::invalid_argument);
}
