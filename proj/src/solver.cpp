#include "kinlab/solver.hpp"

#include <cmath>

namespace kinlab {

ScalarField compute_divu(const FluidState& state, const GeometryCache& geo, int spatial_order) {
    const Grid& grid = *state.grid;
    ScalarField divu(grid.total);
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p)
            divu[p] = divergence_chain(grid, geo, state.u, p, spatial_order);
    });
    return divu;
}

FluidRhs euler_rhs(const FluidState& state, const GeometryCache& geo, const Eos& eos,
                   int spatial_order) {
    const Grid& grid = *state.grid;
    const int n = grid.n;
    FluidRhs rhs;
    rhs.du.resize(n, grid.total);
    rhs.drho.assign(grid.total, 0.0);
    rhs.dS.assign(grid.total, 0.0);

    // sqrt(g) rho u^i, differenced conservatively for the continuity equation.
    VectorGridField mass_flux;
    mass_flux.resize(n, grid.total);
    for (int d = 0; d < n; ++d)
        for (std::size_t p = 0; p < grid.total; ++p)
            mass_flux.comp[d][p] = state.rho[p] * state.u.comp[d][p];

    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            if (!(state.rho[p] > 0)) {
                Vec x = grid.point(p);
                throw StateError(format("non-positive density %s at x = (%s, %s), t = %s",
                                        format_double(state.rho[p]).c_str(),
                                        format_double(x[0]).c_str(),
                                        format_double(n > 1 ? x[1] : 0.0).c_str(),
                                        format_double(state.t).c_str()));
            }
            PressureEval pe = eos.pressure(state.rho[p], state.S[p]);

            double du_coord[kMaxDim][kMaxDim];  // du_coord[i][j] = d_j u^i
            double drho_coord[kMaxDim], dS_coord[kMaxDim];
            for (int j = 0; j < n; ++j) {
                drho_coord[j] = fd_deriv(grid, state.rho, p, j, spatial_order);
                dS_coord[j] = fd_deriv(grid, state.S, p, j, spatial_order);
                for (int i = 0; i < n; ++i)
                    du_coord[i][j] = fd_deriv(grid, state.u.comp[i], p, j, spatial_order);
            }

            for (int i = 0; i < n; ++i) {
                double adv = 0;
                for (int j = 0; j < n; ++j) {
                    double cov = du_coord[i][j];
                    for (int k = 0; k < n; ++k)
                        cov += geo.chris(p, i, j, k) * state.u.comp[k][p];
                    adv += state.u.comp[j][p] * cov;
                }
                double press = 0;
                for (int j = 0; j < n; ++j)
                    press += geo.inv(p, i, j) *
                             (pe.P_rho * drho_coord[j] + pe.P_S * dS_coord[j]);
                rhs.du.comp[i][p] = -adv - press / state.rho[p];
            }

            rhs.drho[p] = -divergence_conservative(grid, geo, mass_flux, p, spatial_order);

            double adv_S = 0;
            for (int j = 0; j < n; ++j) adv_S += state.u.comp[j][p] * dS_coord[j];
            rhs.dS[p] = -adv_S;
        }
    });
    return rhs;
}

double max_stable_dt(const FluidState& state, const GeometryCache& geo, const Eos& eos) {
    const Grid& grid = *state.grid;
    double dt = 1e300;
    for (std::size_t p = 0; p < grid.total; ++p) {
        double cs2 = std::max(eos.pressure(state.rho[p], state.S[p]).P_rho, 0.0);
        double cs = std::sqrt(cs2);
        for (int d = 0; d < grid.n; ++d) {
            double speed =
                std::abs(state.u.comp[d][p]) + cs * std::sqrt(geo.inv(p, d, d));
            if (speed > 1e-14) dt = std::min(dt, grid.h[d] / speed);
        }
    }
    return dt;
}

namespace {

FluidState axpy_state(const FluidState& base, const FluidRhs& k, double coef) {
    FluidState r = base;
    const Grid& grid = *base.grid;
    for (std::size_t p = 0; p < grid.total; ++p) {
        for (int d = 0; d < grid.n; ++d)
            r.u.comp[d][p] = base.u.comp[d][p] + coef * k.du.comp[d][p];
        r.rho[p] = base.rho[p] + coef * k.drho[p];
        r.S[p] = base.S[p] + coef * k.dS[p];
    }
    return r;
}

void check_finite(const FluidState& s) {
    const Grid& grid = *s.grid;
    for (std::size_t p = 0; p < grid.total; ++p) {
        bool bad = !std::isfinite(s.rho[p]) || !std::isfinite(s.S[p]);
        for (int d = 0; d < grid.n && !bad; ++d) bad = !std::isfinite(s.u.comp[d][p]);
        if (bad) {
            Vec x = grid.point(p);
            throw NumericError(format("NaN/Inf detected at x = (%s, %s), t = %s",
                                      format_double(x[0]).c_str(),
                                      format_double(grid.n > 1 ? x[1] : 0.0).c_str(),
                                      format_double(s.t).c_str()));
        }
    }
}

}  // namespace

FluidState step(const FluidState& state, const GeometryCache& geo, const Eos& eos,
                const SolverConfig& cfg, std::vector<MarkerSet>* markers) {
    cfg.validate();
    double dt_max = cfg.cfl_target * max_stable_dt(state, geo, eos);
    if (cfg.dt > dt_max)
        throw ConfigError(format("CFL violation: dt = %s exceeds limit; use dt <= %s",
                                 format_double(cfg.dt).c_str(),
                                 format_double(dt_max).c_str()));

    const double dt = cfg.dt;
    FluidRhs k1 = euler_rhs(state, geo, eos, cfg.spatial_order);
    FluidState s2 = axpy_state(state, k1, 0.5 * dt);
    FluidRhs k2 = euler_rhs(s2, geo, eos, cfg.spatial_order);
    FluidState s3 = axpy_state(state, k2, 0.5 * dt);
    FluidRhs k3 = euler_rhs(s3, geo, eos, cfg.spatial_order);
    FluidState s4 = axpy_state(state, k3, dt);
    FluidRhs k4 = euler_rhs(s4, geo, eos, cfg.spatial_order);

    if (markers && !markers->empty()) {
        ScalarField d1 = compute_divu(state, geo, cfg.spatial_order);
        ScalarField d2 = compute_divu(s2, geo, cfg.spatial_order);
        ScalarField d3 = compute_divu(s3, geo, cfg.spatial_order);
        ScalarField d4 = compute_divu(s4, geo, cfg.spatial_order);
        rk4_transport(*markers,
                      {StageFields{&state, &d1}, StageFields{&s2, &d2},
                       StageFields{&s3, &d3}, StageFields{&s4, &d4}},
                      dt);
    }

    FluidState next = state;
    const Grid& grid = *state.grid;
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            for (int d = 0; d < grid.n; ++d)
                next.u.comp[d][p] =
                    state.u.comp[d][p] + dt / 6.0 *
                                             (k1.du.comp[d][p] + 2 * k2.du.comp[d][p] +
                                              2 * k3.du.comp[d][p] + k4.du.comp[d][p]);
            next.rho[p] = state.rho[p] + dt / 6.0 *
                                             (k1.drho[p] + 2 * k2.drho[p] +
                                              2 * k3.drho[p] + k4.drho[p]);
            next.S[p] = state.S[p] +
                        dt / 6.0 * (k1.dS[p] + 2 * k2.dS[p] + 2 * k3.dS[p] + k4.dS[p]);
        }
    });
    next.t = state.t + dt;
    check_finite(next);
    return next;
}

}  // namespace kinlab
