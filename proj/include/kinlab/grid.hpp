#pragma once
/// @file grid.hpp
/// Structured lattice over a chart, cached per-point geometry, central
/// difference stencils (2nd/4th order), and field interpolation.
///
/// Nodes sit at lo + k*h with h = extent/N per axis. Periodic axes wrap;
/// non-periodic axes clamp their stencils at the edge (scenarios keep the
/// dynamics away from non-periodic boundaries).

#include "kinlab/geometry.hpp"
#include "kinlab/util.hpp"

#include <vector>

namespace kinlab {

struct Grid {
    const ChartMetric* chart = nullptr;
    int n = 0;
    int size[kMaxDim] = {1, 1, 1};
    int stride[kMaxDim] = {0, 0, 0};
    std::size_t total = 0;
    double h[kMaxDim] = {0, 0, 0};

    Grid() = default;
    Grid(const ChartMetric& c, const std::array<int, kMaxDim>& dims);

    Vec point(std::size_t flat) const {
        Vec x(n);
        std::size_t rem = flat;
        for (int d = 0; d < n; ++d) {
            std::size_t i = rem / stride[d];
            rem %= stride[d];
            x[d] = chart->lo[d] + double(i) * h[d];
        }
        return x;
    }

    int coord(std::size_t flat, int axis) const {
        return int((flat / stride[axis]) % size[axis]);
    }

    // Flat index of the neighbor `off` steps along `axis` (wrap or clamp).
    std::size_t neighbor(std::size_t flat, int axis, int off) const {
        int i = coord(flat, axis);
        int j = i + off;
        if (chart->periodic[axis]) {
            j %= size[axis];
            if (j < 0) j += size[axis];
        } else {
            j = std::max(0, std::min(size[axis] - 1, j));
        }
        return flat + std::size_t(j - i) * stride[axis];
    }

    double min_spacing() const {
        double m = h[0];
        for (int d = 1; d < n; ++d) m = std::min(m, h[d]);
        return m;
    }
};

using ScalarField = std::vector<double>;

struct VectorGridField {
    std::array<ScalarField, kMaxDim> comp;
    void resize(int n, std::size_t total) {
        for (int d = 0; d < n; ++d) comp[d].assign(total, 0.0);
    }
};

// Per-point metric data for grid kernels.
struct GeometryCache {
    int n = 0;
    std::size_t total = 0;
    std::vector<double> g, ginv, gamma, sqrtg;

    GeometryCache() = default;
    explicit GeometryCache(const Grid& grid);

    double metric(std::size_t p, int i, int j) const { return g[(p * n + i) * n + j]; }
    double inv(std::size_t p, int i, int j) const { return ginv[(p * n + i) * n + j]; }
    double chris(std::size_t p, int i, int j, int k) const {
        return gamma[((p * n + i) * n + j) * n + k];
    }
    double vol(std::size_t p) const { return sqrtg[p]; }
};

// Central difference of a scalar field along `axis` at point p.
double fd_deriv(const Grid& grid, const ScalarField& f, std::size_t p, int axis, int order);

// Conservative covariant divergence of a vector field:
// (1/sqrt g) d_i (sqrt g V^i). Exactly telescoping on periodic grids.
double divergence_conservative(const Grid& grid, const GeometryCache& geo,
                               const VectorGridField& V, std::size_t p, int order);

// Chain-rule covariant divergence d_i V^i + Gamma^i_{ik} V^k.
double divergence_chain(const Grid& grid, const GeometryCache& geo, const VectorGridField& V,
                        std::size_t p, int order);

// Multilinear interpolation (order 1, default) or tensor cubic (order 3).
// Throws StateError when x leaves a non-periodic axis range.
double interpolate(const Grid& grid, const ScalarField& f, const Vec& x, int order = 1);
Vec interpolate_vector(const Grid& grid, const VectorGridField& f, const Vec& x, int order = 1);

}  // namespace kinlab
