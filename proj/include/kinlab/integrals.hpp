#pragma once
/// @file integrals.hpp
/// Moving-domain integrals, boundary fluxes, circulation, flux-balance
/// series, pointwise conservation residuals, and the triviality check.

#include "kinlab/densities.hpp"
#include "kinlab/jet.hpp"
#include "kinlab/markers.hpp"
#include "kinlab/solver.hpp"

#include <functional>
#include <vector>

namespace kinlab {

// Sum of T(x_k) w_k over a transported interior cloud; the weights carry the
// volume form. Fields are sampled at marker positions with cubic stencils.
double domain_integral(const MarkerSet& markers, const DensitySpec& spec,
                       const FluidState& state, const Eos& eos);

// Polyline quadrature of g(Phi, nu) dA with the outward unit normal obtained
// from the tangent by metric rotation (n = 2, closed polyline).
double boundary_flux(const MarkerSet& boundary, const DensitySpec& spec,
                     const FluidState& state, const Eos& eos);

// Line integral of the velocity 1-form: sum over segments of g(u, dx) at
// segment midpoints.
double circulation(const MarkerSet& curve, const FluidState& state);

// Barotropic open-curve balance term: e + P/rho - g(u,u)/2 evaluated at a
// curve endpoint. The balance residual is d/dt circulation + [term]_start^end.
double circulation_endpoint_term(const Vec& x, const FluidState& state, const Eos& eos);

struct IntegralSeries {
    std::vector<double> times;
    std::vector<double> integral;
    std::vector<double> flux;       // or endpoint balance term for circulation
    std::vector<double> residual;   // centered d/dt(integral) + flux; endpoints 0

    void push(double t, double value, double flux_value);
    void finalize();  // fills residuals by centered differences, endpoints dropped
    double max_abs_residual() const;       // over interior samples
    double max_abs_integral() const;
    double max_relative_residual() const;  // max |residual| / max |integral|
    double relative_drift() const;         // max |I - I_0| / |I_0|
};

// Pointwise D_t T + Div(T u + Phi) over the grid, chain rule through the
// fluid equations; vanishes at the discretization order for valid pairs.
ScalarField local_conservation_residual(const DensitySpec& spec, const FluidState& state,
                                        const GeometryCache& geo, const Eos& eos,
                                        int spatial_order = 2);
double max_abs(const ScalarField& f);

// Non-triviality via the spatial Euler operators: a zeroth-order density is
// trivial iff T_u, T_rho, T_S all vanish at every probe jet.
bool is_trivial_density(const std::function<DensityPartials(const JetPoint&)>& expr,
                        const std::vector<JetPoint>& probes, double tol = 1e-10);
bool is_trivial_divergence(const DivergenceExpression& expr, const ChartMetric& chart,
                           const std::vector<JetPoint>& probes, double tol = 1e-10);

}  // namespace kinlab
