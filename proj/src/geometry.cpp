#include "kinlab/geometry.hpp"

#include <cmath>

namespace kinlab {

Vec ChartMetric::wrap(Vec x) const {
    for (int i = 0; i < dim; ++i) {
        if (!periodic[i]) continue;
        double L = extent(i);
        x[i] -= L * std::floor((x[i] - lo[i]) / L);
    }
    return x;
}

bool ChartMetric::inside(const Vec& x) const {
    for (int i = 0; i < dim; ++i) {
        if (periodic[i]) continue;
        if (x[i] < lo[i] || x[i] >= hi[i]) return false;
    }
    return true;
}

Mat ChartMetric::metric_at(const Vec& x) const {
    Mat g = metric(x);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(g(i, j) - g(j, i)) > 1e-12 * (1 + std::abs(g(i, j))))
                throw GeometryError(format("metric not symmetric at component (%d,%d) of chart %s",
                                           i, j, name.c_str()));
    Vec ev = sym_eigenvalues(g);
    if (ev[0] <= 0) {
        std::string evs;
        for (int i = 0; i < dim; ++i) evs += format_double(ev[i]) + (i + 1 < dim ? ", " : "");
        throw GeometryError("metric not positive definite on chart " + name +
                            " (eigenvalues: " + evs + ")");
    }
    return g;
}

Ten3 ChartMetric::metric_deriv_at(const Vec& x) const {
    if (metric_deriv) return metric_deriv(x);
    Ten3 dg(dim);
    for (int k = 0; k < dim; ++k) {
        double h = h_geom(k);
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        if (!periodic[k] && (xp[k] >= hi[k] || xm[k] < lo[k]))
            throw GeometryError(format(
                "finite-difference stencil leaves chart %s at axis %d, x_%d = %s", name.c_str(),
                k, k, format_double(x[k]).c_str()));
        Mat gp = metric(xp), gm = metric(xm);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) dg(k, i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
    }
    return dg;
}

Ten3 christoffel(const ChartMetric& chart, const Vec& x) {
    int n = chart.dim;
    Mat g = chart.metric_at(x);
    Mat ginv = mat_inverse(g);
    Ten3 dg = chart.metric_deriv_at(x);
    Ten3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double s = 0;
                for (int l = 0; l < n; ++l)
                    s += ginv(i, l) * (dg(j, l, k) + dg(k, l, j) - dg(l, j, k));
                gamma(i, j, k) = 0.5 * s;
                gamma(i, k, j) = gamma(i, j, k);
            }
    return gamma;
}

GeometryEval geometry_at(const ChartMetric& chart, const Vec& x) {
    GeometryEval ge;
    ge.x = x;
    ge.g = chart.metric_at(x);
    ge.g_inv = mat_inverse(ge.g);
    ge.sqrt_det_g = std::sqrt(determinant(ge.g));
    ge.christoffel = christoffel(chart, x);
    return ge;
}

GeometryEval geometry_with_curvature(const ChartMetric& chart, const Vec& x) {
    GeometryEval ge = geometry_at(chart, x);
    int n = chart.dim;

    // dGamma(k,i,j,l) = d_k Gamma^l_{ij} by central differences of Gamma.
    Ten4 dgamma(n);
    for (int k = 0; k < n; ++k) {
        double h = chart.h_geom(k);
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        if (!chart.periodic[k] && (xp[k] >= chart.hi[k] || xm[k] < chart.lo[k]))
            throw GeometryError(format(
                "curvature stencil leaves chart %s near a singular locus: axis %d, x_%d = %s",
                chart.name.c_str(), k, k, format_double(x[k]).c_str()));
        Ten3 gp = christoffel(chart, xp), gm = christoffel(chart, xm);
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    dgamma(k, i, j, l) = (gp(l, i, j) - gm(l, i, j)) / (2 * h);
    }

    // R_{ijk}^l = d_j Gamma^l_{ik} - d_i Gamma^l_{jk}
    //            + Gamma^l_{jm} Gamma^m_{ik} - Gamma^l_{im} Gamma^m_{jk}.
    const Ten3& G = ge.christoffel;
    ge.riemann = Ten4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = dgamma(j, i, k, l) - dgamma(i, j, k, l);
                    for (int m = 0; m < n; ++m)
                        s += G(l, j, m) * G(m, i, k) - G(l, i, m) * G(m, j, k);
                    ge.riemann(i, j, k, l) = s;
                }

    ge.ricci = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += ge.riemann(i, k, j, k);
            ge.ricci(i, j) = s;
        }
    ge.scalar_curv = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ge.scalar_curv += ge.g_inv(i, j) * ge.ricci(i, j);
    ge.have_curvature = true;
    return ge;
}

VectorDerivative covariant_derivative_vector(const GeometryEval& geom, const Vec& u,
                                             const Mat& du) {
    int n = geom.g.n;
    VectorDerivative r;
    r.cov = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = du(i, j);
            for (int k = 0; k < n; ++k) s += geom.christoffel(i, j, k) * u[k];
            r.cov(i, j) = s;
        }
    r.div = 0;
    for (int i = 0; i < n; ++i) r.div += r.cov(i, i);
    r.curl = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double cij = 0;
            for (int k = 0; k < n; ++k)
                cij += geom.g_inv(i, k) * r.cov(j, k) - geom.g_inv(j, k) * r.cov(i, k);
            r.curl(i, j) = cij;
        }
    return r;
}

Mat VectorFieldSpec::deriv_at(const ChartMetric& chart, const Vec& x) const {
    if (deriv) return deriv(x);
    int n = chart.dim;
    Mat d(n);
    for (int j = 0; j < n; ++j) {
        double h = chart.h_geom(j);
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Vec vp = value(xp), vm = value(xm);
        for (int i = 0; i < n; ++i) d(i, j) = (vp[i] - vm[i]) / (2 * h);
    }
    return d;
}

Mat covariant_deriv_lowered(const GeometryEval& geom, const Vec& zeta_up, const Mat& dzeta) {
    int n = geom.g.n;
    // r(j,i) = nabla_j zeta_i = g_ik nabla_j zeta^k
    Mat r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int k = 0; k < n; ++k) {
                double cov = dzeta(k, j);
                for (int m = 0; m < n; ++m) cov += geom.christoffel(k, j, m) * zeta_up[m];
                s += geom.g(i, k) * cov;
            }
            r(j, i) = s;
        }
    return r;
}

Mat killing_residual(const ChartMetric& chart, const VectorFieldSpec& zeta, const Vec& x) {
    GeometryEval geom = geometry_at(chart, x);
    Mat dz = zeta.deriv_at(chart, x);
    Mat cov = covariant_deriv_lowered(geom, zeta.value(x), dz);  // cov(j,i) = nabla_j zeta_i
    int n = chart.dim;
    Mat res(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) res(i, j) = cov(i, j) + cov(j, i);
    return res;
}

Mat homothety_residual(const ChartMetric& chart, const VectorFieldSpec& xi, double lambda,
                       const Vec& x) {
    if (!std::isfinite(lambda)) throw GeometryError("homothety constant must be finite");
    Mat res = killing_residual(chart, xi, x);
    Mat g = chart.metric_at(x);
    return res - lambda * g;
}

Mat curl_free_residual(const ChartMetric& chart, const VectorFieldSpec& chi, const Vec& x) {
    GeometryEval geom = geometry_at(chart, x);
    Mat dc = chi.deriv_at(chart, x);
    return covariant_derivative_vector(geom, chi.value(x), dc).curl;
}

// ---------------------------------------------------------------------------
// Built-in charts
// ---------------------------------------------------------------------------

namespace {

const double kPi = 3.14159265358979323846;

ChartMetric flat_chart(int n, bool periodic, const std::string& name) {
    ChartMetric c;
    c.dim = n;
    c.name = name;
    c.lo = Vec(n);
    c.hi = Vec(n);
    for (int i = 0; i < n; ++i) {
        c.lo[i] = -kPi;
        c.hi[i] = kPi;
        c.periodic[i] = periodic;
    }
    c.metric = [n](const Vec&) { return Mat::identity(n); };
    c.metric_deriv = [n](const Vec&) { return Ten3(n); };
    return c;
}

}  // namespace

ChartMetric make_chart(const std::string& name, int n,
                       const std::map<std::string, double>& params) {
    auto get = [&params](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "flat_torus") return flat_chart(n, true, name);
    if (name == "flat_patch") return flat_chart(n, false, name);
    if (name == "torus_rev") {
        if (n != 2) throw ConfigError("torus_rev is a 2d chart");
        double a = get("a", 2.0);  // g = dr^2 + (a + cos r)^2 dtheta^2, a > 1
        ChartMetric c = flat_chart(2, true, name);
        c.metric = [a](const Vec& x) {
            Mat g = Mat::identity(2);
            double f = a + std::cos(x[0]);
            g(1, 1) = f * f;
            return g;
        };
        c.metric_deriv = [a](const Vec& x) {
            Ten3 dg(2);
            double f = a + std::cos(x[0]);
            dg(0, 1, 1) = -2.0 * f * std::sin(x[0]);
            return dg;
        };
        return c;
    }
    if (name == "sphere_band") {
        if (n != 2) throw ConfigError("sphere_band is a 2d chart");
        double pad = get("pad", 0.2);
        ChartMetric c;
        c.dim = 2;
        c.name = name;
        c.lo = Vec(pad, -kPi);
        c.hi = Vec(kPi - pad, kPi);
        c.periodic = {false, true, false};
        c.metric = [](const Vec& x) {
            Mat g = Mat::identity(2);
            double s = std::sin(x[0]);
            g(1, 1) = s * s;
            return g;
        };
        c.metric_deriv = [](const Vec& x) {
            Ten3 dg(2);
            dg(0, 1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]);
            return dg;
        };
        return c;
    }
    if (name == "torus_rev_x_circle") {
        if (n != 3) throw ConfigError("torus_rev_x_circle is a 3d chart");
        double a = get("a", 2.0);
        ChartMetric c = flat_chart(3, true, name);
        c.metric = [a](const Vec& x) {
            Mat g = Mat::identity(3);
            double f = a + std::cos(x[0]);
            g(1, 1) = f * f;
            return g;
        };
        c.metric_deriv = [a](const Vec& x) {
            Ten3 dg(3);
            double f = a + std::cos(x[0]);
            dg(0, 1, 1) = -2.0 * f * std::sin(x[0]);
            return dg;
        };
        return c;
    }
    throw ConfigError("unknown chart: " + name);
}

VectorFieldSpec axis_field(int n, int axis) {
    VectorFieldSpec f;
    f.label = format("axis:%d", axis);
    f.value = [n, axis](const Vec&) {
        Vec v(n);
        v[axis] = 1.0;
        return v;
    };
    f.deriv = [n](const Vec&) { return Mat(n); };
    return f;
}

VectorFieldSpec rotation_field() {
    VectorFieldSpec f;
    f.label = "rotation";
    f.value = [](const Vec& x) { return Vec(-x[1], x[0]); };
    f.deriv = [](const Vec&) {
        Mat d(2);
        d(0, 1) = -1.0;
        d(1, 0) = 1.0;
        return d;
    };
    return f;
}

VectorFieldSpec radial_field(int n) {
    VectorFieldSpec f;
    f.label = "radial";
    f.value = [n](const Vec& x) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = x[i];
        return v;
    };
    f.deriv = [n](const Vec&) { return Mat::identity(n); };
    return f;
}

VectorFieldSpec linear_potential_field(const Vec& a) {
    VectorFieldSpec f;
    int n = a.n;
    f.label = "grad-linear";
    f.value = [a](const Vec&) { return a; };
    f.deriv = [n](const Vec&) { return Mat(n); };
    f.potential = [a](const Vec& x) { return dot(a, x); };
    f.potential_grad = [a](const Vec&) { return a; };
    f.potential_hess = [n](const Vec&) { return Mat(n); };
    return f;
}

VectorFieldSpec quadratic_potential_field(int n, double scale) {
    VectorFieldSpec f;
    f.label = "grad-quadratic";
    f.value = [n, scale](const Vec& x) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = scale * x[i];
        return v;
    };
    f.deriv = [n, scale](const Vec&) { return scale * Mat::identity(n); };
    f.potential = [scale](const Vec& x) { return 0.5 * scale * dot(x, x); };
    f.potential_grad = [n, scale](const Vec& x) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = scale * x[i];
        return v;
    };
    f.potential_hess = [n, scale](const Vec&) { return scale * Mat::identity(n); };
    return f;
}

VectorFieldSpec square_axis_field(int n, int axis) {
    VectorFieldSpec f;
    f.label = format("square-axis:%d", axis);
    f.value = [n, axis](const Vec& x) {
        Vec v(n);
        v[axis] = x[axis] * x[axis];
        return v;
    };
    f.deriv = [n, axis](const Vec& x) {
        Mat d(n);
        d(axis, axis) = 2.0 * x[axis];
        return d;
    };
    return f;
}

}  // namespace kinlab
