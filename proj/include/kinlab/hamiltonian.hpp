#pragma once
/// @file hamiltonian.hpp
/// The covariant Hamiltonian fluid operator, the density-to-symmetry map,
/// Casimir verification, and symmetry determining residuals along stored
/// runs. Grid derivatives use the same central stencils as the solver.

#include "kinlab/densities.hpp"
#include "kinlab/solver.hpp"

namespace kinlab {

// (dT/du as a covector field, dT/drho, dT/dS) — pointwise partials for
// kinematic densities.
struct VariationalTriple {
    VectorGridField a;  // covector components a_i
    ScalarField b, c;
};

VariationalTriple variational_triple(const DensitySpec& spec, const FluidState& state,
                                     const Eos& eos);

// The 3x3 block operator applied verbatim to a triple of grid fields:
//   row u:  (curl u / rho) . a - grad b + (grad S / rho) c
//   row rho: -div(a raised)
//   row S:  -(grad S / rho) . a
FluidRhs apply_hamiltonian(const VariationalTriple& triple, const FluidState& state,
                           const GeometryCache& geo, int spatial_order = 2);

// Max-norm difference between the Hamiltonian flow of the energy triple and
// the Euler right side; O(h^2) on smooth states.
double hamiltonian_flow_residual(const FluidState& state, const Eos& eos,
                                 const GeometryCache& geo, int spatial_order = 2);

struct SymmetryGenerator {
    VectorGridField eta_u;  // vector components
    ScalarField eta_rho, eta_S;

    double max_abs_all() const;
};

// eta = -H(dT/du, dT/drho, dT/dS), assembled with the density's analytic jet
// partials (chain rule) so that Casimir cancellations are exact.
SymmetryGenerator symmetry_from_density(const DensitySpec& spec, const FluidState& state,
                                        const GeometryCache& geo, const Eos& eos,
                                        int spatial_order = 2);

// Linearized-equation residual of a generator along a stored run: snapshots
// at uniform cadence, generator evaluated per snapshot, D_t by centered
// differences; returns the max norm over interior times and grid points.
double symmetry_determining_residual(
    const std::vector<FluidState>& snapshots,
    const std::function<SymmetryGenerator(const FluidState&)>& generator, const Eos& eos,
    const GeometryCache& geo, int spatial_order = 2);

// Discrete dual pairing <A, rates> = integral of (a_i v^i + b r + c s) dV.
double triple_pairing(const VariationalTriple& A, const FluidRhs& rates,
                      const FluidState& state, const GeometryCache& geo);

}  // namespace kinlab
