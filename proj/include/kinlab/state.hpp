#pragma once
/// @file state.hpp
/// Grid-resident fluid state (u, rho, S) at a time instant.

#include "kinlab/grid.hpp"
#include "kinlab/registry.hpp"

namespace kinlab {

struct FluidState {
    const Grid* grid = nullptr;
    VectorGridField u;
    ScalarField rho, S;
    double t = 0;

    FluidState() = default;
    explicit FluidState(const Grid& g) : grid(&g) {
        u.resize(g.n, g.total);
        rho.assign(g.total, 1.0);
        S.assign(g.total, 0.0);
    }

    // Throws StateError (with grid location) on rho <= 0 or non-finite data.
    void check_valid() const;
};

FluidState make_state(const Grid& grid, const std::vector<FieldExpr>& u_expr,
                      const FieldExpr& rho_expr, const FieldExpr& S_expr, double t = 0);

}  // namespace kinlab
