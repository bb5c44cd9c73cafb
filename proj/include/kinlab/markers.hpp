#pragma once
/// @file markers.hpp
/// Lagrangian marker sets: transported domain interiors (with volume
/// weights), closed boundary polylines, and curves. Marker field sampling
/// uses cubic interpolation; see advect_markers.

#include "kinlab/grid.hpp"
#include "kinlab/state.hpp"

#include <vector>

namespace kinlab {

enum class MarkerKind { DomainInterior, DomainBoundary, Curve };

struct MarkerSet {
    MarkerKind kind = MarkerKind::Curve;
    std::vector<Vec> positions;
    std::vector<double> weights;  // DomainInterior: volume weights w_k (carry sqrt g)
    bool closed = false;
    std::string label;

    double total_weight() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
};

// Closed polygon boundary; throws GeometryError if the polyline self-intersects.
MarkerSet make_boundary_polyline(std::vector<Vec> points);
MarkerSet make_curve(std::vector<Vec> points, bool closed);

// Interior cloud on a sub-lattice of spacing `spacing` clipped to the polygon;
// weights are spacing^n * sqrt(det g) at seed time.
MarkerSet seed_domain_cloud(const ChartMetric& chart, const std::vector<Vec>& polygon,
                            double spacing);

// Markers must keep this clearance (in grid cells) from non-periodic edges.
void check_marker_clearance(const MarkerSet& set, const Grid& grid, double cells = 2.0);

// Frozen-field RK4 transport: dx/dt = u(x), dw/dt = (div u) w, fields sampled
// from the given state (exact for steady fields; runs co-advect through the
// solver's stage fields instead).
void advect_markers(std::vector<MarkerSet>& sets, const FluidState& state,
                    const GeometryCache& geo, double dt, int spatial_order = 2);

// One RK4 substage helper shared with the solver: advances positions/weights
// given the four stage velocity and div-u samplers.
struct StageFields {
    const FluidState* state = nullptr;
    const ScalarField* divu = nullptr;
};
void rk4_transport(std::vector<MarkerSet>& sets, const std::array<StageFields, 4>& stages,
                   double dt);

double shoelace_area(const std::vector<Vec>& polygon);
bool point_in_polygon(const std::vector<Vec>& polygon, const Vec& p);

}  // namespace kinlab
