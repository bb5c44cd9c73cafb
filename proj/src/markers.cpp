#include "kinlab/markers.hpp"

#include <cmath>

namespace kinlab {

namespace {

// Proper segment intersection (excluding shared endpoints).
bool segments_cross(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    auto orient = [](const Vec& p, const Vec& q, const Vec& r) {
        double v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

double shoelace_area(const std::vector<Vec>& polygon) {
    double s = 0;
    std::size_t K = polygon.size();
    for (std::size_t k = 0; k < K; ++k) {
        const Vec& p = polygon[k];
        const Vec& q = polygon[(k + 1) % K];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

bool point_in_polygon(const std::vector<Vec>& polygon, const Vec& p) {
    bool inside = false;
    std::size_t K = polygon.size();
    for (std::size_t k = 0; k < K; ++k) {
        const Vec& a = polygon[k];
        const Vec& b = polygon[(k + 1) % K];
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            double xint = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if (p[0] < xint) inside = !inside;
        }
    }
    return inside;
}

MarkerSet make_boundary_polyline(std::vector<Vec> points) {
    if (points.size() < 3) throw GeometryError("boundary polyline needs >= 3 points");
    std::size_t K = points.size();
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            if (j == i + 1 || (i == 0 && j == K - 1)) continue;
            if (segments_cross(points[i], points[(i + 1) % K], points[j],
                               points[(j + 1) % K]))
                throw GeometryError(format("boundary polyline self-intersects between "
                                           "segments %zu and %zu", i, j));
        }
    MarkerSet s;
    s.kind = MarkerKind::DomainBoundary;
    s.positions = std::move(points);
    s.closed = true;
    return s;
}

MarkerSet make_curve(std::vector<Vec> points, bool closed) {
    if (points.size() < 2) throw GeometryError("curve needs >= 2 points");
    MarkerSet s;
    s.kind = MarkerKind::Curve;
    s.positions = std::move(points);
    s.closed = closed;
    return s;
}

MarkerSet seed_domain_cloud(const ChartMetric& chart, const std::vector<Vec>& polygon,
                            double spacing) {
    if (chart.dim != 2)
        throw ConfigError("domain marker clouds are implemented for n = 2");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Vec& p : polygon) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    MarkerSet s;
    s.kind = MarkerKind::DomainInterior;
    // Offset the sub-lattice by half a spacing so markers are cell-centered
    // within their own quadrature cells.
    for (double x = xmin + 0.5 * spacing; x < xmax; x += spacing)
        for (double y = ymin + 0.5 * spacing; y < ymax; y += spacing) {
            Vec p(x, y);
            if (!point_in_polygon(polygon, p)) continue;
            GeometryEval ge = geometry_at(chart, p);
            s.positions.push_back(p);
            s.weights.push_back(spacing * spacing * ge.sqrt_det_g);
        }
    if (s.positions.empty()) throw GeometryError("domain cloud seeding produced no markers");
    return s;
}

void check_marker_clearance(const MarkerSet& set, const Grid& grid, double cells) {
    const ChartMetric& chart = *grid.chart;
    for (const Vec& p : set.positions)
        for (int d = 0; d < grid.n; ++d) {
            if (chart.periodic[d]) continue;
            double clear = cells * grid.h[d];
            if (p[d] < chart.lo[d] + clear || p[d] > chart.hi[d] - clear)
                throw StateError(format(
                    "marker too close to the non-periodic chart edge on axis %d (x = %s)",
                    d, format_double(p[d]).c_str()));
        }
}

void rk4_transport(std::vector<MarkerSet>& sets, const std::array<StageFields, 4>& stages,
                   double dt) {
    if (sets.empty()) return;
    const Grid& grid = *stages[0].state->grid;
    const ChartMetric& chart = *grid.chart;

    auto sample_u = [&](int stage, const Vec& x) {
        return interpolate_vector(grid, stages[stage].state->u, x, 3);
    };
    auto sample_d = [&](int stage, const Vec& x) {
        return interpolate(grid, *stages[stage].divu, x, 3);
    };

    for (MarkerSet& set : sets) {
        bool weights = set.kind == MarkerKind::DomainInterior && !set.weights.empty();
        for (std::size_t k = 0; k < set.positions.size(); ++k) {
            Vec x0 = set.positions[k];
            double w0 = weights ? set.weights[k] : 0.0;
            Vec k1, k2, k3, k4;
            double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
            try {
                k1 = sample_u(0, x0);
                Vec x1 = chart.wrap(x0 + (0.5 * dt) * k1);
                k2 = sample_u(1, x1);
                Vec x2 = chart.wrap(x0 + (0.5 * dt) * k2);
                k3 = sample_u(2, x2);
                Vec x3 = chart.wrap(x0 + dt * k3);
                k4 = sample_u(3, x3);
                if (weights) {
                    m1 = sample_d(0, x0) * w0;
                    m2 = sample_d(1, x1) * (w0 + 0.5 * dt * m1);
                    m3 = sample_d(2, x2) * (w0 + 0.5 * dt * m2);
                    m4 = sample_d(3, x3) * (w0 + dt * m3);
                }
            } catch (const StateError& e) {
                throw StateError(format("marker %zu lost from set '%s': %s", k,
                                        set.label.c_str(), e.what()));
            }
            set.positions[k] =
                chart.wrap(x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
            if (weights) set.weights[k] = w0 + dt / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4);
        }
    }
}

void advect_markers(std::vector<MarkerSet>& sets, const FluidState& state,
                    const GeometryCache& geo, double dt, int spatial_order) {
    ScalarField divu(state.grid->total);
    const Grid& grid = *state.grid;
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p)
            divu[p] = divergence_chain(grid, geo, state.u, p, spatial_order);
    });
    StageFields sf{&state, &divu};
    rk4_transport(sets, {sf, sf, sf, sf}, dt);
}

}  // namespace kinlab
