#include <doctest.h>

#include "kinlab/grid.hpp"

#include <cmath>

using namespace kinlab;

TEST_CASE("grid indexing and neighbors wrap") {
    ChartMetric chart = make_chart("flat_torus", 2);
    Grid grid(chart, {8, 8, 1});
    CHECK(grid.total == 64);
    // neighbor of the last column wraps to the first
    std::size_t p = grid.neighbor(7, 1, 1);  // row 0, col 7 -> col 0
    CHECK(grid.coord(p, 1) == 0);
    std::size_t q = grid.neighbor(0, 0, -1);
    CHECK(grid.coord(q, 0) == 7);
}

TEST_CASE("fd_deriv is exact for single modes up to stencil accuracy") {
    ChartMetric chart = make_chart("flat_torus", 2);
    Grid grid(chart, {64, 64, 1});
    ScalarField f(grid.total);
    for (std::size_t p = 0; p < grid.total; ++p) {
        Vec x = grid.point(p);
        f[p] = std::sin(x[0]) * std::cos(2 * x[1]);
    }
    double worst2 = 0, worst4 = 0;
    for (std::size_t p = 0; p < grid.total; ++p) {
        Vec x = grid.point(p);
        double exact = std::cos(x[0]) * std::cos(2 * x[1]);
        worst2 = std::max(worst2, std::abs(fd_deriv(grid, f, p, 0, 2) - exact));
        worst4 = std::max(worst4, std::abs(fd_deriv(grid, f, p, 0, 4) - exact));
    }
    CHECK(worst2 < 2e-3);
    CHECK(worst4 < 2e-5);
}

TEST_CASE("conservative divergence telescopes to zero total on periodic grids") {
    ChartMetric chart = make_chart("torus_rev", 2);
    Grid grid(chart, {32, 32, 1});
    GeometryCache geo(grid);
    VectorGridField V;
    V.resize(2, grid.total);
    Rng rng(5, 0);
    for (std::size_t p = 0; p < grid.total; ++p) {
        V.comp[0][p] = rng.normal();
        V.comp[1][p] = rng.normal();
    }
    double total = 0;
    for (std::size_t p = 0; p < grid.total; ++p)
        total += divergence_conservative(grid, geo, V, p, 2) * geo.vol(p);
    CHECK(std::abs(total) < 1e-10);
}

TEST_CASE("chain and conservative divergences agree at O(h^2)") {
    ChartMetric chart = make_chart("torus_rev", 2);
    auto err_at = [&](int N) {
        Grid grid(chart, {N, N, 1});
        GeometryCache geo(grid);
        VectorGridField V;
        V.resize(2, grid.total);
        for (std::size_t p = 0; p < grid.total; ++p) {
            Vec x = grid.point(p);
            V.comp[0][p] = std::sin(x[0] + x[1]);
            V.comp[1][p] = std::cos(x[0]);
        }
        double worst = 0;
        for (std::size_t p = 0; p < grid.total; ++p)
            worst = std::max(worst,
                             std::abs(divergence_chain(grid, geo, V, p, 2) -
                                      divergence_conservative(grid, geo, V, p, 2)));
        return worst;
    };
    double e32 = err_at(32), e64 = err_at(64);
    CHECK(e32 / e64 >= 3.5);
}

TEST_CASE("interpolation") {
    ChartMetric chart = make_chart("flat_torus", 2);
    Grid grid(chart, {32, 32, 1});

    SUBCASE("constant field is reproduced exactly") {
        ScalarField f(grid.total, 3.25);
        CHECK(interpolate(grid, f, Vec(0.37, -2.11), 1) == doctest::Approx(3.25));
        CHECK(interpolate(grid, f, Vec(0.37, -2.11), 3) == doctest::Approx(3.25));
    }
    SUBCASE("smooth field error O(h^2) under refinement") {
        auto err_at = [&](int N) {
            Grid g(chart, {N, N, 1});
            ScalarField f(g.total);
            for (std::size_t p = 0; p < g.total; ++p) {
                Vec x = g.point(p);
                f[p] = std::sin(x[0]) * std::sin(x[1]);
            }
            Rng rng(7, 0);
            double worst = 0;
            for (int k = 0; k < 200; ++k) {
                Vec x(rng.uniform(-3, 3), rng.uniform(-3, 3));
                double exact = std::sin(x[0]) * std::sin(x[1]);
                worst = std::max(worst, std::abs(interpolate(g, f, x, 1) - exact));
            }
            return worst;
        };
        double e32 = err_at(32), e64 = err_at(64);
        CHECK(e32 / e64 >= 3.0);
    }
    SUBCASE("cubic interpolation converges at 4th order") {
        auto err_at = [&](int N) {
            Grid g(chart, {N, N, 1});
            ScalarField f(g.total);
            for (std::size_t p = 0; p < g.total; ++p) {
                Vec x = g.point(p);
                f[p] = std::sin(x[0]) * std::sin(x[1]);
            }
            Rng rng(7, 0);
            double worst = 0;
            for (int k = 0; k < 200; ++k) {
                Vec x(rng.uniform(-3, 3), rng.uniform(-3, 3));
                double exact = std::sin(x[0]) * std::sin(x[1]);
                worst = std::max(worst, std::abs(interpolate(g, f, x, 3) - exact));
            }
            return worst;
        };
        double e16 = err_at(16), e32 = err_at(32);
        CHECK(e16 / e32 >= 12.0);
    }
    SUBCASE("out-of-domain on a non-periodic axis throws") {
        ChartMetric patch = make_chart("flat_patch", 2);
        Grid g(patch, {16, 16, 1});
        ScalarField f(g.total, 1.0);
        CHECK_THROWS_AS(interpolate(g, f, Vec(4.0, 0.0), 1), StateError);
    }
}

TEST_CASE("multilinear exactness on a linear field within a cell") {
    ChartMetric patch = make_chart("flat_patch", 2);
    Grid grid(patch, {16, 16, 1});
    ScalarField f(grid.total);
    for (std::size_t p = 0; p < grid.total; ++p) {
        Vec x = grid.point(p);
        f[p] = 2.0 + 0.5 * x[0] - 1.25 * x[1];
    }
    Rng rng(11, 0);
    for (int k = 0; k < 100; ++k) {
        Vec x(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5));
        double exact = 2.0 + 0.5 * x[0] - 1.25 * x[1];
        CHECK(interpolate(grid, f, x, 1) == doctest::Approx(exact).epsilon(1e-12));
    }
}
