#include <doctest.h>

#include "kinlab/geometry.hpp"

#include <cmath>

using namespace kinlab;

namespace {

const double kPi = 3.14159265358979323846;

// Independent oracle for diagonal surface-of-revolution metrics
// g = dr^2 + f(r)^2 dtheta^2: Gauss curvature K = -f''/f, scalar R = 2K.
double revolution_scalar_curv(double f, double fpp) { return -2.0 * fpp / f; }

std::vector<Vec> interior_points(const ChartMetric& chart, int count, std::uint64_t seed) {
    Rng rng(seed, 0);
    std::vector<Vec> pts;
    for (int k = 0; k < count; ++k) {
        Vec x(chart.dim);
        for (int d = 0; d < chart.dim; ++d) {
            double pad = chart.periodic[d] ? 0.0 : 0.1 * chart.extent(d);
            x[d] = rng.uniform(chart.lo[d] + pad, chart.hi[d] - pad);
        }
        pts.push_back(x);
    }
    return pts;
}

}  // namespace

TEST_CASE("christoffel: flat metric gives zero") {
    ChartMetric flat = make_chart("flat_torus", 2);
    Ten3 g = christoffel(flat, Vec(0.3, -1.2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) CHECK(g(i, j, k) == doctest::Approx(0.0));
}

TEST_CASE("christoffel: unit sphere at theta = pi/3") {
    ChartMetric sphere = make_chart("sphere_band", 2);
    Vec x(kPi / 3.0, 0.7);
    Ten3 g = christoffel(sphere, x);
    // Levi-Civita formula for g = diag(1, sin^2 theta):
    //   Gamma^theta_{phi phi} = -sin(theta) cos(theta),
    //   Gamma^phi_{theta phi} = cot(theta).
    CHECK(g(0, 1, 1) == doctest::Approx(-std::sin(kPi / 3) * std::cos(kPi / 3)).epsilon(1e-10));
    CHECK(g(1, 0, 1) == doctest::Approx(1.0 / std::tan(kPi / 3)).epsilon(1e-10));
    CHECK(g(1, 1, 0) == doctest::Approx(g(1, 0, 1)));
}

TEST_CASE("christoffel: torus of revolution at r = 0") {
    ChartMetric torus = make_chart("torus_rev", 2);
    Ten3 g = christoffel(torus, Vec(0.0, 0.4));
    // f = 2 + cos r: Gamma^r_{theta theta} = -f f' = (2+cos r) sin r = 0 at r=0,
    // Gamma^theta_{r theta} = f'/f = -sin r / (2+cos r) = 0 at r=0.
    CHECK(g(0, 1, 1) == doctest::Approx(0.0));
    CHECK(g(1, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("christoffel symmetry and metric positivity error") {
    ChartMetric torus = make_chart("torus_rev", 2);
    for (const Vec& x : interior_points(torus, 100, 7)) {
        Ten3 g = christoffel(torus, x);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) CHECK(g(i, j, k) == g(i, k, j));
    }

    ChartMetric bad = make_chart("flat_patch", 2);
    bad.metric = [](const Vec&) {
        Mat m(2);
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        return m;
    };
    bad.metric_deriv = nullptr;
    CHECK_THROWS_AS(christoffel(bad, Vec(0.1, 0.1)), GeometryError);
}

TEST_CASE("riemann: flat chart is curvature-free") {
    ChartMetric flat = make_chart("flat_torus", 3);
    GeometryEval ge = geometry_with_curvature(flat, Vec(0.1, 0.2, -0.3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    CHECK(std::abs(ge.riemann(i, j, k, l)) < 1e-12);
    CHECK(std::abs(ge.scalar_curv) < 1e-12);
}

TEST_CASE("riemann: unit sphere has scalar curvature 2") {
    ChartMetric sphere = make_chart("sphere_band", 2);
    for (const Vec& x : interior_points(sphere, 20, 11)) {
        GeometryEval ge = geometry_with_curvature(sphere, x);
        CHECK(ge.scalar_curv == doctest::Approx(2.0).epsilon(1e-6));
    }
}

TEST_CASE("riemann: torus of revolution matches the -f''/f oracle") {
    ChartMetric torus = make_chart("torus_rev", 2);
    // K = cos r / (2 + cos r); at r = pi/2 the curvature vanishes.
    GeometryEval ge = geometry_with_curvature(torus, Vec(kPi / 2, 1.0));
    CHECK(std::abs(ge.scalar_curv) < 1e-6);
    for (const Vec& x : interior_points(torus, 20, 13)) {
        double f = 2.0 + std::cos(x[0]);
        double expected = revolution_scalar_curv(f, -std::cos(x[0]));
        GeometryEval ge2 = geometry_with_curvature(torus, x);
        CHECK(ge2.scalar_curv == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("riemann identities on all built-in charts") {
    for (const char* name : {"torus_rev", "sphere_band", "torus_rev_x_circle"}) {
        ChartMetric chart = make_chart(name, std::string(name) == "torus_rev_x_circle" ? 3 : 2);
        for (const Vec& x : interior_points(chart, 100, 17)) {
            GeometryEval ge = geometry_with_curvature(chart, x);
            int n = chart.dim;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) {
                            // antisymmetry in the first index pair
                            CHECK(std::abs(ge.riemann(i, j, k, l) + ge.riemann(j, i, k, l)) <
                                  1e-10);
                            // first Bianchi identity
                            double cyc = ge.riemann(i, j, k, l) + ge.riemann(j, k, i, l) +
                                         ge.riemann(k, i, j, l);
                            CHECK(std::abs(cyc) < 1e-10);
                        }
            // g_inv g = identity
            Mat prod = mat_mul(ge.g_inv, ge.g);
            CHECK((prod - Mat::identity(n)).max_abs() < 1e-12);
        }
    }
}

TEST_CASE("riemann sign convention: commutator of covariant derivatives") {
    // [nabla_i, nabla_j] a^k = -R_{ijl}^k a^l, checked by finite differences
    // of nabla a for a trig test field on the torus of revolution.
    ChartMetric torus = make_chart("torus_rev", 2);
    auto afield = [](const Vec& x) {
        return Vec(std::sin(x[1]) + 0.3 * std::cos(x[0]), std::cos(x[0] + x[1]));
    };
    auto dafield = [](const Vec& x) {
        Mat d(2);
        d(0, 0) = -0.3 * std::sin(x[0]);
        d(0, 1) = std::cos(x[1]);
        d(1, 0) = -std::sin(x[0] + x[1]);
        d(1, 1) = -std::sin(x[0] + x[1]);
        return d;
    };
    auto cov = [&](const Vec& x) {
        GeometryEval ge = geometry_at(torus, x);
        return covariant_derivative_vector(ge, afield(x), dafield(x)).cov;
    };
    Vec x(0.9, -0.4);
    GeometryEval ge = geometry_with_curvature(torus, x);
    double h = 1e-5;
    // second covariant derivative nabla_i nabla_j a^k by differencing the
    // tensor field nabla_j a^k with connection corrections
    auto second = [&](int i, int j, int k) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double d = (cov(xp)(k, j) - cov(xm)(k, j)) / (2 * h);
        Mat c = cov(x);
        for (int m = 0; m < 2; ++m) {
            d += ge.christoffel(k, i, m) * c(m, j);
            d -= ge.christoffel(m, i, j) * c(k, m);
        }
        return d;
    };
    Vec a = afield(x);
    for (int k = 0; k < 2; ++k) {
        double comm = second(0, 1, k) - second(1, 0, k);
        double expected = 0;
        for (int l = 0; l < 2; ++l) expected -= ge.riemann(0, 1, l, k) * a[l];
        CHECK(comm == doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("metric compatibility nabla g = 0 by finite differences") {
    ChartMetric torus = make_chart("torus_rev", 2);
    for (const Vec& x : interior_points(torus, 30, 23)) {
        GeometryEval ge = geometry_at(torus, x);
        Ten3 dg = torus.metric_deriv_at(x);
        // nabla_k g_ij = d_k g_ij - Gamma^m_{ki} g_mj - Gamma^m_{kj} g_im
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double v = dg(k, i, j);
                    for (int m = 0; m < 2; ++m)
                        v -= ge.christoffel(m, k, i) * ge.g(m, j) +
                             ge.christoffel(m, k, j) * ge.g(i, m);
                    CHECK(std::abs(v) < 1e-6);
                }
    }
}

TEST_CASE("analytic and finite-difference metric derivatives converge at O(h^2)") {
    ChartMetric torus = make_chart("torus_rev", 2);
    ChartMetric fd = torus;
    fd.metric_deriv = nullptr;
    Vec x(1.1, 0.3);
    Ten3 exact = torus.metric_deriv_at(x);

    auto max_err = [&](double scale) {
        ChartMetric c = fd;
        c.h_geom_scale = scale;
        Ten3 approx = c.metric_deriv_at(x);
        double m = 0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    m = std::max(m, std::abs(approx(k, i, j) - exact(k, i, j)));
        return m;
    };
    double e1 = max_err(4e-3);
    double e2 = max_err(2e-3);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("covariant derivative of vector fields") {
    ChartMetric flat = make_chart("flat_torus", 2);
    GeometryEval ge = geometry_at(flat, Vec(0.2, 0.4));

    SUBCASE("constant field on flat chart") {
        VectorDerivative d = covariant_derivative_vector(ge, Vec(1.0, 2.0), Mat(2));
        CHECK(d.cov.max_abs() == doctest::Approx(0.0));
        CHECK(d.div == doctest::Approx(0.0));
    }
    SUBCASE("identity field has divergence n") {
        VectorDerivative d =
            covariant_derivative_vector(ge, Vec(0.2, 0.4), Mat::identity(2));
        CHECK(d.div == doctest::Approx(2.0));
    }
    SUBCASE("constant components on the sphere pick up the connection") {
        ChartMetric sphere = make_chart("sphere_band", 2);
        Vec x(kPi / 3, 0.2);
        GeometryEval gs = geometry_at(sphere, x);
        VectorDerivative d = covariant_derivative_vector(gs, Vec(0.0, 1.0), Mat(2));
        // nabla_theta u^phi = Gamma^phi_{theta phi} = cot(theta)
        CHECK(d.cov(1, 0) == doctest::Approx(1.0 / std::tan(kPi / 3)).epsilon(1e-10));
    }
}

TEST_CASE("killing residuals") {
    SUBCASE("translation on the flat torus") {
        ChartMetric flat = make_chart("flat_torus", 2);
        VectorFieldSpec zeta = axis_field(2, 0);
        for (const Vec& x : interior_points(flat, 10, 31))
            CHECK(killing_residual(flat, zeta, x).max_abs() < 1e-12);
    }
    SUBCASE("rotational isometry of the torus of revolution") {
        ChartMetric torus = make_chart("torus_rev", 2);
        VectorFieldSpec zeta = axis_field(2, 1);
        for (const Vec& x : interior_points(torus, 25, 37))
            CHECK(killing_residual(torus, zeta, x).max_abs() < 1e-8);
        // and via the finite-difference Jacobian fallback
        VectorFieldSpec fdz = zeta;
        fdz.deriv = nullptr;
        CHECK(killing_residual(torus, fdz, Vec(0.7, 0.1)).max_abs() < 1e-7);
    }
    SUBCASE("a quadratic field is not Killing") {
        ChartMetric patch = make_chart("flat_patch", 2);
        VectorFieldSpec bad = square_axis_field(2, 0);
        Vec x(0.8, 0.1);
        Mat r = killing_residual(patch, bad, x);
        CHECK(r(0, 0) == doctest::Approx(4.0 * x[0]));
    }
    SUBCASE("randomized polynomial fields are falsified") {
        ChartMetric torus = make_chart("torus_rev", 2);
        Rng rng(99, 5);
        double worst = 0;
        VectorFieldSpec f;
        double a = rng.uniform(0.5, 1.5), b = rng.uniform(-1.0, 1.0);
        f.value = [a, b](const Vec& x) { return Vec(a * x[0] * x[0] + b, b * x[1]); };
        f.deriv = [a, b](const Vec& x) {
            Mat d(2);
            d(0, 0) = 2 * a * x[0];
            d(1, 1) = b;
            return d;
        };
        for (const Vec& x : interior_points(torus, 20, 41))
            worst = std::max(worst, killing_residual(torus, f, x).max_abs());
        CHECK(worst >= 1e-2);
    }
}

TEST_CASE("homothety residuals") {
    ChartMetric patch = make_chart("flat_patch", 2);
    VectorFieldSpec xi = radial_field(2);
    Vec x(0.5, -0.7);
    CHECK(homothety_residual(patch, xi, 2.0, x).max_abs() < 1e-12);
    Mat g = patch.metric_at(x);
    Mat r = homothety_residual(patch, xi, 1.0, x);
    CHECK((r - g).max_abs() < 1e-12);

    ChartMetric torus = make_chart("torus_rev", 2);
    VectorFieldSpec zeta = axis_field(2, 1);
    CHECK(homothety_residual(torus, zeta, 0.0, Vec(0.4, 0.9)).max_abs() < 1e-8);
}

TEST_CASE("curl-free residuals") {
    ChartMetric patch = make_chart("flat_patch", 2);
    SUBCASE("gradient field") {
        VectorFieldSpec grad = linear_potential_field(Vec(0.7, -0.3));
        CHECK(curl_free_residual(patch, grad, Vec(0.2, 0.3)).max_abs() < 1e-12);
    }
    SUBCASE("rotation field has curl magnitude 2") {
        VectorFieldSpec rot = rotation_field();
        Mat r = curl_free_residual(patch, rot, Vec(0.4, -0.1));
        CHECK(r(0, 1) == doctest::Approx(2.0));
        CHECK(r(1, 0) == doctest::Approx(-2.0));
    }
    SUBCASE("torus rotational Killing field is not curl-free away from f' = 0") {
        ChartMetric torus = make_chart("torus_rev", 2);
        VectorFieldSpec zeta = axis_field(2, 1);
        Mat r = curl_free_residual(torus, zeta, Vec(kPi / 2, 0.3));
        CHECK(r.max_abs() > 1e-2);
    }
}

TEST_CASE("potential consistency: value_fn agrees with raised gradient") {
    ChartMetric patch = make_chart("flat_patch", 2);
    VectorFieldSpec q = quadratic_potential_field(2, 1.0);
    for (const Vec& x : interior_points(patch, 10, 43)) {
        GeometryEval ge = geometry_at(patch, x);
        Vec vg = mat_vec(ge.g_inv, q.potential_grad(x));
        CHECK((vg - q.value(x)).max_abs() < 1e-10);
    }
}

TEST_CASE("curvature refusal near the chart boundary") {
    ChartMetric sphere = make_chart("sphere_band", 2);
    Vec near_pole(sphere.lo[0] + 0.5 * sphere.h_geom(0), 0.0);
    CHECK_THROWS_AS(geometry_with_curvature(sphere, near_pole), GeometryError);
}
