#include "kinlab/integrals.hpp"

#include <cmath>

namespace kinlab {

namespace {

struct SampledPoint {
    GeometryEval geom;
    Vec u;
    double rho, S;
};

SampledPoint sample_fields(const FluidState& state, const Vec& x) {
    const Grid& grid = *state.grid;
    SampledPoint s;
    s.geom = geometry_at(*grid.chart, x);
    s.u = interpolate_vector(grid, state.u, x, 3);
    s.rho = interpolate(grid, state.rho, x, 3);
    s.S = interpolate(grid, state.S, x, 3);
    return s;
}

// Minimum-image segment displacement; positions are stored wrapped, so a
// segment crossing a periodic seam must not jump by a period.
Vec segment_vec(const ChartMetric& chart, const Vec& a, const Vec& b) {
    Vec d = b - a;
    for (int i = 0; i < chart.dim; ++i) {
        if (!chart.periodic[i]) continue;
        double L = chart.extent(i);
        d[i] -= L * std::round(d[i] / L);
    }
    return d;
}

}  // namespace

double domain_integral(const MarkerSet& markers, const DensitySpec& spec,
                       const FluidState& state, const Eos& eos) {
    if (markers.kind != MarkerKind::DomainInterior)
        throw ConfigError("domain_integral expects a DomainInterior marker set");
    if (markers.positions.empty()) throw ConfigError("empty marker set");
    const ChartMetric& chart = *state.grid->chart;
    double sum = 0;
    for (std::size_t k = 0; k < markers.positions.size(); ++k) {
        const Vec& x = markers.positions[k];
        SampledPoint s = sample_fields(state, x);
        AttachedField fd = eval_attached(spec, chart, x);
        sum += density_value(spec, state.t, s.geom, fd, s.u, s.rho, s.S, eos) *
               markers.weights[k];
    }
    return sum;
}

double boundary_flux(const MarkerSet& boundary, const DensitySpec& spec,
                     const FluidState& state, const Eos& eos) {
    if (boundary.kind != MarkerKind::DomainBoundary || !boundary.closed)
        throw ConfigError("boundary_flux expects a closed DomainBoundary polyline");
    const ChartMetric& chart = *state.grid->chart;
    if (chart.dim != 2) throw ConfigError("boundary_flux is implemented for n = 2");

    const std::size_t K = boundary.positions.size();
    double total = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const Vec& a = boundary.positions[k];
        const Vec& b = boundary.positions[(k + 1) % K];
        Vec tang = segment_vec(chart, a, b);
        Vec mid = chart.wrap(a + 0.5 * tang);
        SampledPoint s = sample_fields(state, mid);
        double ds = std::sqrt(std::max(0.0, dot(tang, mat_vec(s.geom.g, tang))));
        if (ds < 1e-300) continue;
        // Outward unit normal for a counterclockwise polyline:
        // nu_i = eps_ij that^j with eps_ij = sqrt(g) [[0,1],[-1,0]].
        Vec that = (1.0 / ds) * tang;
        Vec nu_low(2);
        nu_low[0] = s.geom.sqrt_det_g * that[1];
        nu_low[1] = -s.geom.sqrt_det_g * that[0];
        AttachedField fd = eval_attached(spec, chart, mid);
        Vec Phi = flux_vector(spec, state.t, s.geom, fd, s.u, s.rho, s.S, eos);
        total += dot(Phi, nu_low) * ds;
    }
    return total;
}

double circulation(const MarkerSet& curve, const FluidState& state) {
    if (curve.kind != MarkerKind::Curve)
        throw ConfigError("circulation expects a Curve marker set");
    const std::size_t K = curve.positions.size();
    const std::size_t segs = curve.closed ? K : K - 1;
    if (segs == 0) throw GeometryError("degenerate curve");
    const ChartMetric& chart = *state.grid->chart;
    double total = 0, length = 0;
    for (std::size_t k = 0; k < segs; ++k) {
        const Vec& a = curve.positions[k];
        const Vec& b = curve.positions[(k + 1) % K];
        Vec dx = segment_vec(chart, a, b);
        Vec mid = chart.wrap(a + 0.5 * dx);
        SampledPoint s = sample_fields(state, mid);
        total += dot(s.u, mat_vec(s.geom.g, dx));
        length += std::sqrt(std::max(0.0, dot(dx, mat_vec(s.geom.g, dx))));
    }
    if (length < 1e-300) throw GeometryError("degenerate (zero-length) curve");
    return total;
}

double circulation_endpoint_term(const Vec& x, const FluidState& state, const Eos& eos) {
    SampledPoint s = sample_fields(state, x);
    double alpha = dot(s.u, mat_vec(s.geom.g, s.u));
    double e = eos.internal_energy(s.rho, s.S);
    double P = eos.pressure(s.rho, s.S).P;
    return e + P / s.rho - 0.5 * alpha;
}

void IntegralSeries::push(double t, double value, double flux_value) {
    times.push_back(t);
    integral.push_back(value);
    flux.push_back(flux_value);
}

void IntegralSeries::finalize() {
    if (times.size() < 3)
        throw NumericError("flux balance series needs at least 3 snapshots");
    residual.assign(times.size(), 0.0);
    for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        double dIdt = (integral[k + 1] - integral[k - 1]) / (times[k + 1] - times[k - 1]);
        residual[k] = dIdt + flux[k];
    }
}

double IntegralSeries::max_abs_residual() const {
    double m = 0;
    for (std::size_t k = 1; k + 1 < residual.size(); ++k)
        m = std::max(m, std::abs(residual[k]));
    return m;
}

double IntegralSeries::max_abs_integral() const {
    double m = 0;
    for (double v : integral) m = std::max(m, std::abs(v));
    return m;
}

double IntegralSeries::max_relative_residual() const {
    double denom = max_abs_integral();
    return max_abs_residual() / (denom > 1e-300 ? denom : 1.0);
}

double IntegralSeries::relative_drift() const {
    double denom = std::abs(integral.front());
    if (denom < 1e-300) denom = 1.0;
    double m = 0;
    for (double v : integral) m = std::max(m, std::abs(v - integral.front()));
    return m / denom;
}

ScalarField local_conservation_residual(const DensitySpec& spec, const FluidState& state,
                                        const GeometryCache& geo, const Eos& eos,
                                        int spatial_order) {
    const Grid& grid = *state.grid;
    const ChartMetric& chart = *grid.chart;
    const int n = grid.n;
    FluidRhs rhs = euler_rhs(state, geo, eos, spatial_order);

    // W^i = T u^i + Phi^i on the grid, then a conservative divergence.
    VectorGridField W;
    W.resize(n, grid.total);
    ScalarField DtT(grid.total);
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            Vec x = grid.point(p);
            GeometryEval ge = geometry_at(chart, x);
            AttachedField fd = eval_attached(spec, chart, x);
            Vec u(n);
            for (int d = 0; d < n; ++d) u[d] = state.u.comp[d][p];
            DensityPartials dp =
                density_partials(spec, state.t, ge, fd, u, state.rho[p], state.S[p], eos);
            Vec Phi = flux_vector(spec, state.t, ge, fd, u, state.rho[p], state.S[p], eos);
            for (int d = 0; d < n; ++d) W.comp[d][p] = dp.T * u[d] + Phi[d];
            double dt_T = dp.T_t + dp.T_rho * rhs.drho[p] + dp.T_S * rhs.dS[p];
            for (int d = 0; d < n; ++d) dt_T += dp.T_u[d] * rhs.du.comp[d][p];
            DtT[p] = dt_T;
        }
    });
    ScalarField res(grid.total);
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p)
            res[p] = DtT[p] + divergence_conservative(grid, geo, W, p, spatial_order);
    });
    return res;
}

double max_abs(const ScalarField& f) {
    double m = 0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

bool is_trivial_density(const std::function<DensityPartials(const JetPoint&)>& expr,
                        const std::vector<JetPoint>& probes, double tol) {
    for (const JetPoint& jet : probes) {
        DensityPartials d = expr(jet);
        if (d.T_u.max_abs() > tol || std::abs(d.T_rho) > tol || std::abs(d.T_S) > tol)
            return false;
    }
    return true;
}

bool is_trivial_divergence(const DivergenceExpression& expr, const ChartMetric& chart,
                           const std::vector<JetPoint>& probes, double tol) {
    for (const JetPoint& jet : probes) {
        EulerResiduals r = euler_ops_of_divergence(expr, chart, jet);
        if (r.max_abs() > tol) return false;
    }
    return true;
}

}  // namespace kinlab
