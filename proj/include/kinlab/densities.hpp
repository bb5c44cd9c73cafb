#pragma once
/// @file densities.hpp
/// The classified kinematic conserved densities with their moving fluxes and
/// analytic jet-space partial derivatives. The partial tables drive the
/// determining-equation residuals, the Hamiltonian symmetry map, and the
/// grid-side conservation checks, so each variant is written out once here.

#include "kinlab/eos.hpp"
#include "kinlab/geometry.hpp"
#include "kinlab/util.hpp"

#include <optional>
#include <string>

namespace kinlab {

enum class DensityVariant {
    Mass,
    VolumetricEntropy,
    Energy,
    Momentum,
    GalileanMomentum,
    SimilarityEnergy,
    GalileanEnergy,
    NonIsentropicMomentum,
    NonIsentropicEnergy,
};

std::string variant_name(DensityVariant v);

struct DensitySpec {
    DensityVariant variant = DensityVariant::Mass;
    VectorFieldSpec field;   // zeta / xi / grad-potential, where applicable
    double lambda = 0;       // homothety constant (SimilarityEnergy, GalileanEnergy)
    ExprFn f;                // entropy function (VolumetricEntropy, NonIsentropic*)

    std::string label() const;
    bool needs_field() const;
    bool needs_potential() const;
    bool needs_entropy_fn() const;

    // Checks the Theorem-1 side conditions for this variant against the chart
    // and EOS at a deterministic set of interior sample points. Throws
    // ClassificationError naming the violated condition.
    void validate(const ChartMetric& chart, const Eos& eos, double tol_geom = 1e-6) const;
};

// Attached-field data evaluated at one point.
struct AttachedField {
    bool present = false;
    Vec zeta;        // zeta^i
    Mat dzeta;       // (i,j) -> d_j zeta^i
    bool has_potential = false;
    double pot = 0;
    Vec pot_grad;    // d_i psi (covector)
    Mat pot_hess;    // coordinate Hessian d_i d_j psi
};

AttachedField eval_attached(const DensitySpec& spec, const ChartMetric& chart, const Vec& x);

// All partial derivatives of T(t, x, u, rho, S) needed by the determining
// equations, plus the explicit-x covariant derivatives (which act only on the
// chart-coordinate dependence: the metric and the attached geometric fields).
struct DensityPartials {
    int n = 0;
    double T = 0;
    double T_t = 0;
    Vec T_u;              // covector T_{u^i}
    double T_rho = 0, T_S = 0;
    Mat T_uu;             // T_{u^i u^j}
    Vec T_urho, T_uS;
    double T_rhorho = 0, T_rhoS = 0;
    Vec T_tu;
    double T_trho = 0, T_tS = 0;
    Vec covx_T;                   // nabla_i T (explicit x dependence only)
    Vec covx_T_rho, covx_T_S;     // nabla_i T_rho, nabla_i T_S
    Mat covx_T_u;                 // (j,i) -> nabla_j T_{u^i}
};

DensityPartials density_partials(const DensitySpec& spec, double t, const GeometryEval& geom,
                                 const AttachedField& fd, const Vec& u, double rho, double S,
                                 const Eos& eos);

double density_value(const DensitySpec& spec, double t, const GeometryEval& geom,
                     const AttachedField& fd, const Vec& u, double rho, double S,
                     const Eos& eos);

// Moving flux Phi and its jet partials.
struct FluxEval {
    Vec Phi;          // Phi^i
    Mat Phi_u;        // (i,k) -> dPhi^i / du^k
    Vec Phi_rho, Phi_S;
    double covx_div_Phi = 0;  // nabla_i Phi^i through explicit x dependence
};

FluxEval flux_eval(const DensitySpec& spec, double t, const GeometryEval& geom,
                   const AttachedField& fd, const Vec& u, double rho, double S,
                   const Eos& eos);

Vec flux_vector(const DensitySpec& spec, double t, const GeometryEval& geom,
                const AttachedField& fd, const Vec& u, double rho, double S, const Eos& eos);

// h(S) = integral of f(S) P'(S) from S0 = 0, for the isobaric-entropy pair.
double entropy_flux_potential(const ExprFn& f, const Eos& eos, double S);

}  // namespace kinlab
