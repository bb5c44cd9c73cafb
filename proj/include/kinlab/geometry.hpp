#pragma once
/// @file geometry.hpp
/// Coordinate-chart Riemannian geometry: metric evaluation, Levi-Civita
/// connection, curvature, covariant operators, and Killing / homothety /
/// curl-free residuals. Everything is a pure function of position.
///
/// Curvature sign convention used throughout the project:
///     [nabla_i, nabla_j] a^k = -R_{ijl}^k a^l
/// with R stored as riemann(i,j,l,k). The Ricci tensor is R_{ij} = R_{ikj}^k
/// and the scalar curvature R = g^{ij} R_{ij}; the unit 2-sphere has R = +2.

#include "kinlab/util.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace kinlab {

struct ChartMetric {
    int dim = 2;
    std::string name;
    Vec lo, hi;                      // domain box [lo_i, hi_i) per axis
    std::array<bool, kMaxDim> periodic = {false, false, false};
    std::function<Mat(const Vec&)> metric;                 // g_ij(x)
    std::function<Ten3(const Vec&)> metric_deriv;          // optional: (k,i,j) -> d_k g_ij
    double h_geom_scale = 1e-4;      // finite-difference step = scale * extent

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double h_geom(int axis) const { return h_geom_scale * extent(axis); }
    bool analytic_derivs() const { return bool(metric_deriv); }

    // Wrap periodic coordinates into the box; non-periodic axes untouched.
    Vec wrap(Vec x) const;
    bool inside(const Vec& x) const;

    Mat metric_at(const Vec& x) const;        // validates symmetry/positivity
    Ten3 metric_deriv_at(const Vec& x) const; // analytic or central differences
};

struct GeometryEval {
    Vec x;
    Mat g, g_inv;
    double sqrt_det_g = 0;
    Ten3 christoffel;   // (i,j,k) -> Gamma^i_{jk}
    bool have_curvature = false;
    Ten4 riemann;       // (i,j,k,l) -> R_{ijk}^l
    Mat ricci;
    double scalar_curv = 0;
};

// Connection only (no curvature); cheap path for grid kernels.
GeometryEval geometry_at(const ChartMetric& chart, const Vec& x);
// Connection + curvature. dGamma by central differences of christoffel with
// step h_geom; refuses points whose stencil leaves a non-periodic domain.
GeometryEval geometry_with_curvature(const ChartMetric& chart, const Vec& x);

Ten3 christoffel(const ChartMetric& chart, const Vec& x);

// nabla_j u^i = d_j u^i + Gamma^i_{jk} u^k, from the value u and the
// coordinate Jacobian du(i,j) = d_j u^i. Also exposes div and curl.
struct VectorDerivative {
    Mat cov;       // cov(i,j) = nabla_j u^i
    double div = 0;
    Mat curl;      // curl(i,j) = 2 nabla^[i u^j] = nabla^i u^j - nabla^j u^i
};
VectorDerivative covariant_derivative_vector(const GeometryEval& geom, const Vec& u,
                                             const Mat& du);

// A vector field with optional analytic Jacobian and optional potential.
struct VectorFieldSpec {
    std::string label;
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> deriv;  // optional: (i,j) -> d_j zeta^i
    // Optional potential data: zeta = grad psi. Hessian is the coordinate
    // one, d_i d_j psi; the covariant Hessian subtracts Gamma^k_{ij} d_k psi.
    std::function<double(const Vec&)> potential;
    std::function<Vec(const Vec&)> potential_grad;   // d_i psi
    std::function<Mat(const Vec&)> potential_hess;   // d_i d_j psi

    bool has_potential() const { return bool(potential); }
    Mat deriv_at(const ChartMetric& chart, const Vec& x) const;  // analytic or FD
};

// (L_zeta g)_ij = nabla_i zeta_j + nabla_j zeta_i; zero iff zeta is Killing.
Mat killing_residual(const ChartMetric& chart, const VectorFieldSpec& zeta, const Vec& x);
// L_xi g - lambda g; zero iff xi is a homothety with constant lambda.
Mat homothety_residual(const ChartMetric& chart, const VectorFieldSpec& xi, double lambda,
                       const Vec& x);
// 2 nabla^[i chi^j]; zero iff chi is locally a gradient.
Mat curl_free_residual(const ChartMetric& chart, const VectorFieldSpec& chi, const Vec& x);

// Lowered covariant derivative nabla_j zeta_i of a vector field at x.
Mat covariant_deriv_lowered(const GeometryEval& geom, const Vec& zeta_up, const Mat& dzeta);

// ---------------------------------------------------------------------------
// Built-in charts.
//   flat_torus   g = delta, all axes periodic on [-pi,pi)^n        (n = 2,3)
//   torus_rev    g = dr^2 + (2+cos r)^2 dtheta^2, periodic          (n = 2)
//   sphere_band  g = diag(1, sin^2 theta), theta in [0.2, pi-0.2]   (n = 2)
//   flat_patch   g = delta, non-periodic on [-pi,pi)^n              (n = 2,3)
//   torus_rev_x_circle  torus_rev x flat circle, periodic           (n = 3)
// ---------------------------------------------------------------------------
ChartMetric make_chart(const std::string& name, int n,
                       const std::map<std::string, double>& params = {});

// Catalogued vector fields / potentials on the built-in charts.
VectorFieldSpec axis_field(int n, int axis);                     // zeta = d/dx^axis
VectorFieldSpec rotation_field();                                // (-x2, x1), n = 2
VectorFieldSpec radial_field(int n);                             // xi^i = x^i
VectorFieldSpec linear_potential_field(const Vec& a);            // psi = a.x
VectorFieldSpec quadratic_potential_field(int n, double scale);  // psi = scale/2 |x|^2
VectorFieldSpec square_axis_field(int n, int axis);  // zeta^i = (x^axis)^2 delta^i_axis

}  // namespace kinlab
