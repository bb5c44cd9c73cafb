#pragma once
/// @file solver.hpp
/// RK4 time integration of the covariant compressible Euler system on
/// periodic structured grids, with optional co-advection of marker sets
/// through the RK4 stage velocities.

#include "kinlab/eos.hpp"
#include "kinlab/markers.hpp"
#include "kinlab/state.hpp"

namespace kinlab {

struct SolverConfig {
    double dt = 1e-3;
    double cfl_target = 0.9;
    int spatial_order = 2;  // 2 or 4
    double t_end = 1.0;
    int snapshot_every = 10;

    void validate() const {
        if (dt <= 0) throw ConfigError("solver.dt must be positive");
        if (cfl_target <= 0 || cfl_target > 1)
            throw ConfigError("solver.cfl_target must lie in (0, 1]");
        if (spatial_order != 2 && spatial_order != 4)
            throw ConfigError("solver.spatial_order must be 2 or 4");
    }
};

struct FluidRhs {
    VectorGridField du;
    ScalarField drho, dS;
};

// du^i/dt = -u^j nabla_j u^i - (P_rho grad^i rho + P_S grad^i S)/rho
// drho/dt = -(1/sqrt g) d_i (sqrt g rho u^i)
// dS/dt   = -u^i d_i S
FluidRhs euler_rhs(const FluidState& state, const GeometryCache& geo, const Eos& eos,
                   int spatial_order = 2);

// Chain-rule covariant divergence of the velocity field (used for marker
// weight transport and the Hamiltonian blocks).
ScalarField compute_divu(const FluidState& state, const GeometryCache& geo, int spatial_order);

// Largest dt allowed by the per-axis coordinate wave speed |u^d| + c_s sqrt(g^dd).
double max_stable_dt(const FluidState& state, const GeometryCache& geo, const Eos& eos);

// One classical RK4 step; markers (if any) are co-advected through the stage
// velocity fields. Throws on CFL violation with a suggested dt.
FluidState step(const FluidState& state, const GeometryCache& geo, const Eos& eos,
                const SolverConfig& cfg, std::vector<MarkerSet>* markers = nullptr);

}  // namespace kinlab
