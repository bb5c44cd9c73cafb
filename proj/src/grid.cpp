#include "kinlab/grid.hpp"

#include <cmath>

namespace kinlab {

Grid::Grid(const ChartMetric& c, const std::array<int, kMaxDim>& dims) {
    chart = &c;
    n = c.dim;
    total = 1;
    for (int d = n - 1; d >= 0; --d) {
        size[d] = dims[d];
        if (size[d] < 4) throw ConfigError("grid needs at least 4 points per axis");
        stride[d] = int(total);
        total *= std::size_t(size[d]);
        h[d] = c.extent(d) / double(size[d]);
    }
}

GeometryCache::GeometryCache(const Grid& grid) {
    n = grid.n;
    total = grid.total;
    g.resize(total * n * n);
    ginv.resize(total * n * n);
    gamma.resize(total * n * n * n);
    sqrtg.resize(total);
    const ChartMetric& chart = *grid.chart;
    parallel_for(total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            GeometryEval ge = geometry_at(chart, grid.point(p));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    g[(p * n + i) * n + j] = ge.g(i, j);
                    ginv[(p * n + i) * n + j] = ge.g_inv(i, j);
                    for (int k = 0; k < n; ++k)
                        gamma[((p * n + i) * n + j) * n + k] = ge.christoffel(i, j, k);
                }
            sqrtg[p] = ge.sqrt_det_g;
        }
    });
}

double fd_deriv(const Grid& grid, const ScalarField& f, std::size_t p, int axis, int order) {
    if (order == 4) {
        double fp1 = f[grid.neighbor(p, axis, 1)], fm1 = f[grid.neighbor(p, axis, -1)];
        double fp2 = f[grid.neighbor(p, axis, 2)], fm2 = f[grid.neighbor(p, axis, -2)];
        return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12.0 * grid.h[axis]);
    }
    return (f[grid.neighbor(p, axis, 1)] - f[grid.neighbor(p, axis, -1)]) /
           (2.0 * grid.h[axis]);
}

double divergence_conservative(const Grid& grid, const GeometryCache& geo,
                               const VectorGridField& V, std::size_t p, int order) {
    double s = 0;
    for (int d = 0; d < grid.n; ++d) {
        if (order == 4) {
            std::size_t p1 = grid.neighbor(p, d, 1), m1 = grid.neighbor(p, d, -1);
            std::size_t p2 = grid.neighbor(p, d, 2), m2 = grid.neighbor(p, d, -2);
            s += (-geo.vol(p2) * V.comp[d][p2] + 8 * geo.vol(p1) * V.comp[d][p1] -
                  8 * geo.vol(m1) * V.comp[d][m1] + geo.vol(m2) * V.comp[d][m2]) /
                 (12.0 * grid.h[d]);
        } else {
            std::size_t p1 = grid.neighbor(p, d, 1), m1 = grid.neighbor(p, d, -1);
            s += (geo.vol(p1) * V.comp[d][p1] - geo.vol(m1) * V.comp[d][m1]) /
                 (2.0 * grid.h[d]);
        }
    }
    return s / geo.vol(p);
}

double divergence_chain(const Grid& grid, const GeometryCache& geo, const VectorGridField& V,
                        std::size_t p, int order) {
    double s = 0;
    for (int d = 0; d < grid.n; ++d) {
        s += fd_deriv(grid, V.comp[d], p, d, order);
        for (int k = 0; k < grid.n; ++k) s += geo.chris(p, d, d, k) * V.comp[k][p];
    }
    return s;
}

namespace {

struct AxisSample {
    int base = 0;     // leftmost node index of the stencil
    double frac = 0;  // fractional offset in [0,1)
};

AxisSample locate(const Grid& grid, const Vec& x, int axis) {
    const ChartMetric& c = *grid.chart;
    double s = (x[axis] - c.lo[axis]) / grid.h[axis];
    if (c.periodic[axis]) {
        double N = double(grid.size[axis]);
        s -= N * std::floor(s / N);
    } else if (x[axis] < c.lo[axis] || x[axis] > c.hi[axis]) {
        throw StateError(format("interpolation point left non-periodic axis %d: x = %s",
                                axis, format_double(x[axis]).c_str()));
    }
    AxisSample a;
    a.base = int(std::floor(s));
    a.frac = s - double(a.base);
    if (a.base >= grid.size[axis]) {
        a.base -= grid.size[axis];
    }
    return a;
}

int wrap_index(const Grid& grid, int axis, int i) {
    int N = grid.size[axis];
    if (grid.chart->periodic[axis]) {
        i %= N;
        if (i < 0) i += N;
        return i;
    }
    return std::max(0, std::min(N - 1, i));
}

void cubic_weights(double t, double w[4]) {
    // Lagrange weights on nodes {-1, 0, 1, 2}.
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t * t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0;
    w[3] = t * (t * t - 1.0) / 6.0;
}

}  // namespace

double interpolate(const Grid& grid, const ScalarField& f, const Vec& x, int order) {
    AxisSample ax[kMaxDim];
    for (int d = 0; d < grid.n; ++d) ax[d] = locate(grid, x, d);

    if (order >= 3) {
        double w[kMaxDim][4];
        int idx[kMaxDim][4];
        for (int d = 0; d < grid.n; ++d) {
            cubic_weights(ax[d].frac, w[d]);
            for (int k = 0; k < 4; ++k) idx[d][k] = wrap_index(grid, d, ax[d].base - 1 + k);
        }
        double sum = 0;
        int count = 1;
        for (int d = 0; d < grid.n; ++d) count *= 4;
        for (int c = 0; c < count; ++c) {
            int rem = c;
            std::size_t flat = 0;
            double weight = 1.0;
            for (int d = 0; d < grid.n; ++d) {
                int k = rem % 4;
                rem /= 4;
                flat += std::size_t(idx[d][k]) * std::size_t(grid.stride[d]);
                weight *= w[d][k];
            }
            sum += weight * f[flat];
        }
        return sum;
    }

    double sum = 0;
    int count = 1 << grid.n;
    for (int c = 0; c < count; ++c) {
        std::size_t flat = 0;
        double weight = 1.0;
        for (int d = 0; d < grid.n; ++d) {
            int k = (c >> d) & 1;
            flat += std::size_t(wrap_index(grid, d, ax[d].base + k)) *
                    std::size_t(grid.stride[d]);
            weight *= k ? ax[d].frac : (1.0 - ax[d].frac);
        }
        sum += weight * f[flat];
    }
    return sum;
}

Vec interpolate_vector(const Grid& grid, const VectorGridField& f, const Vec& x, int order) {
    Vec r(grid.n);
    for (int d = 0; d < grid.n; ++d) r[d] = interpolate(grid, f.comp[d], x, order);
    return r;
}

}  // namespace kinlab
