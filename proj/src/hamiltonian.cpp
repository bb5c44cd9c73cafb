#include "kinlab/hamiltonian.hpp"

#include <cmath>

namespace kinlab {

VariationalTriple variational_triple(const DensitySpec& spec, const FluidState& state,
                                     const Eos& eos) {
    const Grid& grid = *state.grid;
    const ChartMetric& chart = *grid.chart;
    const int n = grid.n;
    VariationalTriple tr;
    tr.a.resize(n, grid.total);
    tr.b.assign(grid.total, 0.0);
    tr.c.assign(grid.total, 0.0);
    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            Vec x = grid.point(p);
            GeometryEval ge = geometry_at(chart, x);
            AttachedField fd = eval_attached(spec, chart, x);
            Vec u(n);
            for (int d = 0; d < n; ++d) u[d] = state.u.comp[d][p];
            DensityPartials dp =
                density_partials(spec, state.t, ge, fd, u, state.rho[p], state.S[p], eos);
            for (int d = 0; d < n; ++d) tr.a.comp[d][p] = dp.T_u[d];
            tr.b[p] = dp.T_rho;
            tr.c[p] = dp.T_S;
        }
    });
    return tr;
}

FluidRhs apply_hamiltonian(const VariationalTriple& triple, const FluidState& state,
                           const GeometryCache& geo, int spatial_order) {
    const Grid& grid = *state.grid;
    const int n = grid.n;
    FluidRhs out;
    out.du.resize(n, grid.total);
    out.drho.assign(grid.total, 0.0);
    out.dS.assign(grid.total, 0.0);

    // Raised a, for the divergence block.
    VectorGridField a_up;
    a_up.resize(n, grid.total);
    for (std::size_t p = 0; p < grid.total; ++p)
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += geo.inv(p, i, j) * triple.a.comp[j][p];
            a_up.comp[i][p] = s;
        }

    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            if (!(state.rho[p] > 0))
                throw StateError("Hamiltonian operator applied at non-positive density");
            double rho = state.rho[p];

            double du_coord[kMaxDim][kMaxDim];
            double db[kMaxDim], dS[kMaxDim];
            for (int j = 0; j < n; ++j) {
                db[j] = fd_deriv(grid, triple.b, p, j, spatial_order);
                dS[j] = fd_deriv(grid, state.S, p, j, spatial_order);
                for (int i = 0; i < n; ++i)
                    du_coord[i][j] = fd_deriv(grid, state.u.comp[i], p, j, spatial_order);
            }
            // cov(i,j) = nabla_j u^i, then curl C^{ij} = nabla^i u^j - nabla^j u^i
            double cov[kMaxDim][kMaxDim];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = du_coord[i][j];
                    for (int k = 0; k < n; ++k)
                        s += geo.chris(p, i, j, k) * state.u.comp[k][p];
                    cov[i][j] = s;
                }
            double curl[kMaxDim][kMaxDim];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0;
                    for (int k = 0; k < n; ++k)
                        s += geo.inv(p, i, k) * cov[j][k] - geo.inv(p, j, k) * cov[i][k];
                    curl[i][j] = s;
                }

            for (int i = 0; i < n; ++i) {
                double row = 0;
                for (int j = 0; j < n; ++j) row += curl[i][j] * triple.a.comp[j][p] / rho;
                for (int j = 0; j < n; ++j)
                    row -= geo.inv(p, i, j) * db[j];
                for (int j = 0; j < n; ++j)
                    row += geo.inv(p, i, j) * dS[j] * triple.c[p] / rho;
                out.du.comp[i][p] = row;
            }

            out.drho[p] = -divergence_conservative(grid, geo, a_up, p, spatial_order);

            double gradS_dot_a = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    gradS_dot_a += geo.inv(p, i, j) * dS[j] * triple.a.comp[i][p];
            out.dS[p] = -gradS_dot_a / rho;
        }
    });
    return out;
}

double hamiltonian_flow_residual(const FluidState& state, const Eos& eos,
                                 const GeometryCache& geo, int spatial_order) {
    DensitySpec energy;
    energy.variant = DensityVariant::Energy;
    VariationalTriple tr = variational_triple(energy, state, eos);
    FluidRhs flow = apply_hamiltonian(tr, state, geo, spatial_order);
    FluidRhs rhs = euler_rhs(state, geo, eos, spatial_order);
    const Grid& grid = *state.grid;
    double m = 0;
    for (std::size_t p = 0; p < grid.total; ++p) {
        for (int d = 0; d < grid.n; ++d)
            m = std::max(m, std::abs(flow.du.comp[d][p] - rhs.du.comp[d][p]));
        m = std::max(m, std::abs(flow.drho[p] - rhs.drho[p]));
        m = std::max(m, std::abs(flow.dS[p] - rhs.dS[p]));
    }
    return m;
}

double SymmetryGenerator::max_abs_all() const {
    double m = 0;
    for (const auto& c : eta_u.comp)
        for (double v : c) m = std::max(m, std::abs(v));
    for (double v : eta_rho) m = std::max(m, std::abs(v));
    for (double v : eta_S) m = std::max(m, std::abs(v));
    return m;
}

SymmetryGenerator symmetry_from_density(const DensitySpec& spec, const FluidState& state,
                                        const GeometryCache& geo, const Eos& eos,
                                        int spatial_order) {
    const Grid& grid = *state.grid;
    const ChartMetric& chart = *grid.chart;
    const int n = grid.n;
    SymmetryGenerator gen;
    gen.eta_u.resize(n, grid.total);
    gen.eta_rho.assign(grid.total, 0.0);
    gen.eta_S.assign(grid.total, 0.0);

    parallel_for(grid.total, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            Vec x = grid.point(p);
            GeometryEval ge = geometry_at(chart, x);
            AttachedField fd = eval_attached(spec, chart, x);
            Vec u(n);
            for (int d = 0; d < n; ++d) u[d] = state.u.comp[d][p];
            double rho = state.rho[p];
            DensityPartials dp =
                density_partials(spec, state.t, ge, fd, u, rho, state.S[p], eos);

            double du_coord[kMaxDim][kMaxDim];
            double drho[kMaxDim], dS[kMaxDim];
            for (int j = 0; j < n; ++j) {
                drho[j] = fd_deriv(grid, state.rho, p, j, spatial_order);
                dS[j] = fd_deriv(grid, state.S, p, j, spatial_order);
                for (int i = 0; i < n; ++i)
                    du_coord[i][j] = fd_deriv(grid, state.u.comp[i], p, j, spatial_order);
            }
            double cov[kMaxDim][kMaxDim];  // nabla_j u^i
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = du_coord[i][j];
                    for (int k = 0; k < n; ++k) s += ge.christoffel(i, j, k) * u[k];
                    cov[i][j] = s;
                }

            // Total gradient of dT/drho through the jet chain rule.
            double Db[kMaxDim];
            for (int j = 0; j < n; ++j) {
                double s = dp.covx_T_rho[j] + dp.T_rhorho * drho[j] + dp.T_rhoS * dS[j];
                for (int k = 0; k < n; ++k) s += dp.T_urho[k] * cov[k][j];
                Db[j] = s;
            }

            for (int i = 0; i < n; ++i) {
                double row = 0;
                // -(curl u / rho) . a
                for (int j = 0; j < n; ++j) {
                    double curl_ij = 0;
                    for (int k = 0; k < n; ++k)
                        curl_ij += ge.g_inv(i, k) * cov[j][k] - ge.g_inv(j, k) * cov[i][k];
                    row -= curl_ij * dp.T_u[j] / rho;
                }
                // + grad(dT/drho) - (grad S / rho) dT/dS
                for (int j = 0; j < n; ++j)
                    row += ge.g_inv(i, j) * (Db[j] - dS[j] * dp.T_S / rho);
                gen.eta_u.comp[i][p] = row;
            }

            // + total divergence of the raised covector dT/du
            double div_a = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double Dja = dp.covx_T_u(i, j) + dp.T_urho[j] * drho[i] +
                                 dp.T_uS[j] * dS[i];
                    for (int k = 0; k < n; ++k) Dja += dp.T_uu(j, k) * cov[k][i];
                    div_a += ge.g_inv(i, j) * Dja;
                }
            gen.eta_rho[p] = div_a;

            double gradS_dot_a = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    gradS_dot_a += ge.g_inv(i, j) * dS[j] * dp.T_u[i];
            gen.eta_S[p] = gradS_dot_a / rho;
        }
    });
    return gen;
}

double symmetry_determining_residual(
    const std::vector<FluidState>& snapshots,
    const std::function<SymmetryGenerator(const FluidState&)>& generator, const Eos& eos,
    const GeometryCache& geo, int spatial_order) {
    if (snapshots.size() < 3)
        throw NumericError("symmetry residual needs at least 3 snapshots");
    const Grid& grid = *snapshots.front().grid;
    const int n = grid.n;

    std::vector<SymmetryGenerator> gens;
    gens.reserve(snapshots.size());
    for (const FluidState& s : snapshots) gens.push_back(generator(s));

    double worst = 0;
    for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
        const FluidState& st = snapshots[k];
        double two_dt = snapshots[k + 1].t - snapshots[k - 1].t;
        const SymmetryGenerator& gp = gens[k + 1];
        const SymmetryGenerator& gm = gens[k - 1];
        const SymmetryGenerator& gc = gens[k];

        // P, P_rho eta_rho + P_S eta_S, and rho eta_u + eta_rho u as grid fields
        ScalarField Pfield(grid.total), lin_p(grid.total);
        VectorGridField mass_pert;
        mass_pert.resize(n, grid.total);
        for (std::size_t p = 0; p < grid.total; ++p) {
            PressureEval pe = eos.pressure(st.rho[p], st.S[p]);
            Pfield[p] = pe.P;
            lin_p[p] = pe.P_rho * gc.eta_rho[p] + pe.P_S * gc.eta_S[p];
            for (int d = 0; d < n; ++d)
                mass_pert.comp[d][p] = st.rho[p] * gc.eta_u.comp[d][p] +
                                       gc.eta_rho[p] * st.u.comp[d][p];
        }

        for (std::size_t p = 0; p < grid.total; ++p) {
            double rho = st.rho[p];
            double dS[kMaxDim], dP[kMaxDim], dlin[kMaxDim];
            double du_cov[kMaxDim][kMaxDim], deta_cov[kMaxDim][kMaxDim];
            for (int j = 0; j < n; ++j) {
                dS[j] = fd_deriv(grid, st.S, p, j, spatial_order);
                dP[j] = fd_deriv(grid, Pfield, p, j, spatial_order);
                dlin[j] = fd_deriv(grid, lin_p, p, j, spatial_order);
                for (int i = 0; i < n; ++i) {
                    double su = fd_deriv(grid, st.u.comp[i], p, j, spatial_order);
                    double se = fd_deriv(grid, gc.eta_u.comp[i], p, j, spatial_order);
                    for (int m = 0; m < n; ++m) {
                        su += geo.chris(p, i, j, m) * st.u.comp[m][p];
                        se += geo.chris(p, i, j, m) * gc.eta_u.comp[m][p];
                    }
                    du_cov[i][j] = su;
                    deta_cov[i][j] = se;
                }
            }

            for (int i = 0; i < n; ++i) {
                double r = (gp.eta_u.comp[i][p] - gm.eta_u.comp[i][p]) / two_dt;
                for (int j = 0; j < n; ++j) {
                    r += st.u.comp[j][p] * deta_cov[i][j];
                    r += gc.eta_u.comp[j][p] * du_cov[i][j];
                }
                double gradP_up = 0, gradlin_up = 0;
                for (int j = 0; j < n; ++j) {
                    gradP_up += geo.inv(p, i, j) * dP[j];
                    gradlin_up += geo.inv(p, i, j) * dlin[j];
                }
                r += -gc.eta_rho[p] / (rho * rho) * gradP_up + gradlin_up / rho;
                worst = std::max(worst, std::abs(r));
            }

            double r_rho = (gp.eta_rho[p] - gm.eta_rho[p]) / two_dt +
                           divergence_conservative(grid, geo, mass_pert, p, spatial_order);
            worst = std::max(worst, std::abs(r_rho));

            double r_S = (gp.eta_S[p] - gm.eta_S[p]) / two_dt;
            for (int j = 0; j < n; ++j) {
                r_S += gc.eta_u.comp[j][p] * dS[j];
                r_S += st.u.comp[j][p] * fd_deriv(grid, gc.eta_S, p, j, spatial_order);
            }
            worst = std::max(worst, std::abs(r_S));
        }
    }
    return worst;
}

double triple_pairing(const VariationalTriple& A, const FluidRhs& rates,
                      const FluidState& state, const GeometryCache& geo) {
    const Grid& grid = *state.grid;
    double cell = 1.0;
    for (int d = 0; d < grid.n; ++d) cell *= grid.h[d];
    double s = 0;
    for (std::size_t p = 0; p < grid.total; ++p) {
        double v = A.b[p] * rates.drho[p] + A.c[p] * rates.dS[p];
        for (int d = 0; d < grid.n; ++d) v += A.a.comp[d][p] * rates.du.comp[d][p];
        s += v * geo.vol(p) * cell;
    }
    return s;
}

}  // namespace kinlab
