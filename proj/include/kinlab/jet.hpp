#pragma once
/// @file jet.hpp
/// Pointwise evaluation of the determining equations on randomized jet-space
/// samples. A jet point treats (t, x, u, rho, S, grad u, grad rho, grad S)
/// and, at order 2, the symmetrized second derivatives as independent
/// coordinates; the antisymmetric parts of second derivatives are forced by
/// the curvature:  nabla_[j nabla_k] u^i = -1/2 R_{jkl}^i u^l,  and vanish
/// for scalars. Everything here is independent of any PDE solve.

#include "kinlab/densities.hpp"
#include "kinlab/eos.hpp"
#include "kinlab/geometry.hpp"

#include <cstdint>
#include <vector>

namespace kinlab {

struct JetPoint {
    double t = 0;
    Vec x;
    GeometryEval geom;   // includes curvature for order-2 jets
    Vec u;
    double rho = 1, S = 0;
    Mat grad_u;          // (i,j) -> nabla_j u^i
    Vec grad_rho, grad_S;
    int order = 1;
    Ten3 u2sym;          // (i,j,k) -> nabla_(j nabla_k) u^i
    Mat rho2, S2;        // symmetric second derivatives of rho, S

    // Full second derivative including the curvature-forced antisymmetric part.
    double u2_full(int i, int j, int k) const;
};

// Reproducible jets: x uniform over the chart interior, u / grad u / grad rho
// / grad S scaled normal draws, rho in [0.5, 2], S in [-1, 1], t in [0, 1].
// Per-jet counter-based seeding: jet k depends only on (seed, k).
std::vector<JetPoint> sample_jets(const ChartMetric& chart, int count, std::uint64_t seed,
                                  int order = 1);

// Total time derivative of T on the jet, with time derivatives of the fluid
// variables eliminated through the fluid equations.
double material_time_derivative(const DensityPartials& d, const JetPoint& jet, const Eos& eos);

struct EulerResiduals {
    Vec E_u;
    double E_rho = 0, E_S = 0;
    double max_abs() const {
        return std::max(E_u.max_abs(), std::max(std::abs(E_rho), std::abs(E_S)));
    }
};

// The three closed-form expressions E_u(D_t T), E_rho(D_t T), E_S(D_t T).
EulerResiduals euler_residuals(const DensityPartials& d, const JetPoint& jet, const Eos& eos);

// The seven split determining equations, kept separate for diagnostics.
struct DeterminingResiduals {
    double t1 = 0, t4 = 0;
    Vec t2, t6;
    Mat t3, t5;
    Ten3 t7;  // (j,k,i)
    std::array<double, 7> max_abs() const;
    double worst() const;
};

DeterminingResiduals determining_system_residuals(const DensityPartials& d, const JetPoint& jet,
                                                  const Eos& eos);

// D_t T + Div(T u) + Div Phi via the chain rule through the jet; vanishes
// identically for a valid (T, Phi) pair.
double flux_consistency(const DensityPartials& d, const FluxEval& flux, const JetPoint& jet,
                        const Eos& eos);

// Determining equation for the p = 1 form alpha = u-flat on an order-2 jet:
// D_t(d alpha) + d(u . d alpha), returned componentwise (antisymmetric).
Mat oneform_residual(const JetPoint& jet, const Eos& eos);

// Closed form of the same residual (the baroclinic term); test oracle.
Mat oneform_residual_expected(const JetPoint& jet, const Eos& eos);

// Convenience wrappers joining DensitySpec evaluation with a jet point.
DensityPartials spec_partials_at(const DensitySpec& spec, const ChartMetric& chart,
                                 const JetPoint& jet, const Eos& eos);
FluxEval spec_flux_at(const DensitySpec& spec, const ChartMetric& chart, const JetPoint& jet,
                      const Eos& eos);
EulerResiduals spec_euler_residuals(const DensitySpec& spec, const ChartMetric& chart,
                                    const JetPoint& jet, const Eos& eos);

// ---------------------------------------------------------------------------
// Divergence-form expressions Theta^i = a^i(x) p(rho) q(S) (c0 + c_k u^k).
// Div Theta is a total covariant divergence by construction, so the spatial
// Euler operators must annihilate it.
// ---------------------------------------------------------------------------
struct DivergenceExpression {
    VectorFieldSpec a;
    ExprFn p, q;
    double c0 = 1.0;
    Vec c;

    double value(const ChartMetric& chart, const JetPoint& jet) const;  // Div Theta
};

// E_u / E_rho / E_S of Div Theta: derivative parts by high-order finite
// differences in the jet coordinates, total-derivative parts analytic.
EulerResiduals euler_ops_of_divergence(const DivergenceExpression& expr,
                                       const ChartMetric& chart, const JetPoint& jet);

}  // namespace kinlab
