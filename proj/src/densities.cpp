#include "kinlab/densities.hpp"

#include <cmath>

namespace kinlab {

std::string variant_name(DensityVariant v) {
    switch (v) {
        case DensityVariant::Mass: return "mass";
        case DensityVariant::VolumetricEntropy: return "volumetric_entropy";
        case DensityVariant::Energy: return "energy";
        case DensityVariant::Momentum: return "momentum";
        case DensityVariant::GalileanMomentum: return "galilean_momentum";
        case DensityVariant::SimilarityEnergy: return "similarity_energy";
        case DensityVariant::GalileanEnergy: return "galilean_energy";
        case DensityVariant::NonIsentropicMomentum: return "nonisentropic_momentum";
        case DensityVariant::NonIsentropicEnergy: return "nonisentropic_energy";
    }
    return "?";
}

std::string DensitySpec::label() const {
    std::string s = variant_name(variant);
    if (needs_field() && !field.label.empty()) s += "[" + field.label + "]";
    return s;
}

bool DensitySpec::needs_field() const {
    switch (variant) {
        case DensityVariant::Momentum:
        case DensityVariant::GalileanMomentum:
        case DensityVariant::SimilarityEnergy:
        case DensityVariant::GalileanEnergy:
        case DensityVariant::NonIsentropicMomentum:
            return true;
        default:
            return false;
    }
}

bool DensitySpec::needs_potential() const {
    return variant == DensityVariant::GalileanMomentum ||
           variant == DensityVariant::GalileanEnergy;
}

bool DensitySpec::needs_entropy_fn() const {
    return variant == DensityVariant::VolumetricEntropy ||
           variant == DensityVariant::NonIsentropicMomentum ||
           variant == DensityVariant::NonIsentropicEnergy;
}

void DensitySpec::validate(const ChartMetric& chart, const Eos& eos, double tol_geom) const {
    // Deterministic interior sample points.
    Rng rng(20240901u, fnv1a(chart.name));
    std::vector<Vec> pts;
    for (int k = 0; k < 12; ++k) {
        Vec x(chart.dim);
        for (int d = 0; d < chart.dim; ++d) {
            double pad = chart.periodic[d] ? 0.0 : 0.1 * chart.extent(d);
            x[d] = rng.uniform(chart.lo[d] + pad, chart.hi[d] - pad);
        }
        pts.push_back(x);
    }
    auto fail = [this](const std::string& cond) {
        throw ClassificationError(label() + ": violated condition: " + cond);
    };

    if (needs_potential() && !field.has_potential())
        fail("field must be the gradient of a stored potential");
    if (needs_entropy_fn() && f.is_constant())
        fail("entropy function f(S) must be non-constant");
    if (variant == DensityVariant::VolumetricEntropy && f.is_constant())
        fail("entropy function f(S) must be non-constant");

    switch (variant) {
        case DensityVariant::Momentum:
        case DensityVariant::NonIsentropicMomentum:
            for (const Vec& x : pts)
                if (killing_residual(chart, field, x).max_abs() > tol_geom)
                    fail("zeta must satisfy the Killing equation on the active chart");
            break;
        case DensityVariant::GalileanMomentum:
            for (const Vec& x : pts) {
                if (killing_residual(chart, field, x).max_abs() > tol_geom)
                    fail("grad psi must satisfy the Killing equation");
                if (curl_free_residual(chart, field, x).max_abs() > tol_geom)
                    fail("grad psi must be curl-free");
            }
            break;
        case DensityVariant::SimilarityEnergy:
        case DensityVariant::GalileanEnergy:
            for (const Vec& x : pts)
                if (homothety_residual(chart, field, lambda, x).max_abs() > tol_geom)
                    fail(format("field must be a homothety with constant lambda = %g", lambda));
            break;
        default:
            break;
    }

    switch (variant) {
        case DensityVariant::SimilarityEnergy:
        case DensityVariant::GalileanEnergy:
            if (!eos.polytropic_special_exponent(chart.dim))
                fail(format("EOS must be polytropic with exponent gamma = 1 + 2/n = %g",
                            1.0 + 2.0 / chart.dim));
            break;
        case DensityVariant::NonIsentropicMomentum:
        case DensityVariant::NonIsentropicEnergy:
            if (!eos.isobaric_predicate())
                fail("EOS must be isobaric-entropy (P_rho identically zero)");
            break;
        default:
            break;
    }
}

AttachedField eval_attached(const DensitySpec& spec, const ChartMetric& chart, const Vec& x) {
    AttachedField a;
    if (!spec.needs_field()) return a;
    a.present = true;
    a.zeta = spec.field.value(x);
    a.dzeta = spec.field.deriv_at(chart, x);
    if (spec.field.has_potential()) {
        a.has_potential = true;
        a.pot = spec.field.potential(x);
        a.pot_grad = spec.field.potential_grad(x);
        a.pot_hess = spec.field.potential_hess(x);
    }
    return a;
}

double entropy_flux_potential(const ExprFn& f, const Eos& eos, double S) {
    auto integrand = [&](double s) { return f.value(s) * eos.pressure(1.0, s).P_S; };
    return integrate_adaptive(integrand, 0.0, S, 1e-13);
}

namespace {

Vec lower(const GeometryEval& geom, const Vec& v) {
    return mat_vec(geom.g, v);
}

Vec raise(const GeometryEval& geom, const Vec& cov) {
    return mat_vec(geom.g_inv, cov);
}

// nabla_j zeta_i from attached field data.
Mat lowered_jacobian(const GeometryEval& geom, const AttachedField& fd) {
    return covariant_deriv_lowered(geom, fd.zeta, fd.dzeta);
}

// Covariant Hessian of the potential: nabla_i nabla_j psi.
Mat covariant_hessian(const GeometryEval& geom, const AttachedField& fd) {
    int n = geom.g.n;
    Mat h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = fd.pot_hess(i, j);
            for (int k = 0; k < n; ++k) s -= geom.christoffel(k, i, j) * fd.pot_grad[k];
            h(i, j) = s;
        }
    return h;
}

double trace_up(const GeometryEval& geom, const Mat& low) {
    double s = 0;
    for (int i = 0; i < low.n; ++i)
        for (int j = 0; j < low.n; ++j) s += geom.g_inv(i, j) * low(i, j);
    return s;
}

}  // namespace

DensityPartials density_partials(const DensitySpec& spec, double t, const GeometryEval& geom,
                                 const AttachedField& fd, const Vec& u, double rho, double S,
                                 const Eos& eos) {
    const int n = geom.g.n;
    DensityPartials d;
    d.n = n;
    d.T_u = Vec(n);
    d.T_uu = Mat(n);
    d.T_urho = Vec(n);
    d.T_uS = Vec(n);
    d.T_tu = Vec(n);
    d.covx_T = Vec(n);
    d.covx_T_rho = Vec(n);
    d.covx_T_S = Vec(n);
    d.covx_T_u = Mat(n);

    Vec u_low = lower(geom, u);
    double alpha = dot(u_low, u);

    switch (spec.variant) {
        case DensityVariant::Mass: {
            d.T = rho;
            d.T_rho = 1.0;
            break;
        }
        case DensityVariant::VolumetricEntropy: {
            double fv = spec.f.value(S), f1 = spec.f.deriv(S);
            d.T = rho * fv;
            d.T_rho = fv;
            d.T_S = rho * f1;
            d.T_rhoS = f1;
            break;
        }
        case DensityVariant::Energy: {
            PressureEval pe = eos.pressure(rho, S);
            double e = eos.internal_energy(rho, S);
            double e_S = eos.internal_energy_dS(rho, S);
            d.T = rho * (0.5 * alpha + e);
            d.T_u = rho * u_low;
            d.T_rho = 0.5 * alpha + e + pe.P / rho;
            d.T_S = rho * e_S;
            d.T_uu = rho * geom.g;
            d.T_urho = u_low;
            d.T_rhorho = pe.P_rho / rho;
            d.T_rhoS = e_S + pe.P_S / rho;
            break;
        }
        case DensityVariant::Momentum: {
            Mat Z = lowered_jacobian(geom, fd);  // (j,i) = nabla_j zeta_i
            Vec zl = lower(geom, fd.zeta);
            double uz = dot(u, zl);
            d.T = rho * uz;
            d.T_u = rho * zl;
            d.T_rho = uz;
            d.T_urho = zl;
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += u[k] * Z(j, k);
                d.covx_T_rho[j] = s;
                for (int i = 0; i < n; ++i) d.covx_T_u(j, i) = rho * Z(j, i);
            }
            break;
        }
        case DensityVariant::GalileanMomentum: {
            Mat H = covariant_hessian(geom, fd);
            const Vec& p = fd.pot_grad;
            double up = dot(u, p);
            d.T = rho * (fd.pot - t * up);
            d.T_u = (-t * rho) * p;
            d.T_rho = fd.pot - t * up;
            d.T_t = -rho * up;
            d.T_urho = -t * p;
            d.T_tu = -rho * p;
            d.T_trho = -up;
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += u[k] * H(j, k);
                d.covx_T_rho[j] = p[j] - t * s;
                for (int i = 0; i < n; ++i) d.covx_T_u(j, i) = -t * rho * H(j, i);
            }
            break;
        }
        case DensityVariant::SimilarityEnergy: {
            PressureEval pe = eos.pressure(rho, S);
            double s0 = eos.variant() == EosVariant::Polytropic ? eos.sigma0() : 0.0;
            double lam = spec.lambda;
            Mat Z = lowered_jacobian(geom, fd);
            Vec xl = lower(geom, fd.zeta);
            double ux = dot(u, xl);
            d.T = rho * ux - 0.5 * lam * t * (rho * alpha + n * pe.P - (n + 2) * s0);
            d.T_u = rho * xl + (-lam * t * rho) * u_low;
            d.T_rho = ux - 0.5 * lam * t * (alpha + n * pe.P_rho);
            d.T_S = -0.5 * lam * t * n * pe.P_S;
            d.T_t = -0.5 * lam * (rho * alpha + n * pe.P - (n + 2) * s0);
            d.T_uu = (-lam * t * rho) * geom.g;
            d.T_urho = xl + (-lam * t) * u_low;
            d.T_rhorho = -0.5 * lam * t * n * pe.P_rhorho;
            d.T_rhoS = -0.5 * lam * t * n * pe.P_rhoS;
            d.T_tu = (-lam * rho) * u_low;
            d.T_trho = -0.5 * lam * (alpha + n * pe.P_rho);
            d.T_tS = -0.5 * lam * n * pe.P_S;
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += u[k] * Z(j, k);
                d.covx_T_rho[j] = s;
                for (int i = 0; i < n; ++i) d.covx_T_u(j, i) = rho * Z(j, i);
            }
            break;
        }
        case DensityVariant::GalileanEnergy: {
            PressureEval pe = eos.pressure(rho, S);
            double s0 = eos.variant() == EosVariant::Polytropic ? eos.sigma0() : 0.0;
            double lam = spec.lambda;
            Mat H = covariant_hessian(geom, fd);
            const Vec& p = fd.pot_grad;
            double up = dot(u, p);
            double t2 = t * t;
            d.T = rho * fd.pot - t * rho * up +
                  0.25 * lam * t2 * (rho * alpha + n * pe.P - (n + 2) * s0);
            d.T_u = (-t * rho) * p + (0.5 * lam * t2 * rho) * u_low;
            d.T_rho = fd.pot - t * up + 0.25 * lam * t2 * (alpha + n * pe.P_rho);
            d.T_S = 0.25 * lam * t2 * n * pe.P_S;
            d.T_t = -rho * up + 0.5 * lam * t * (rho * alpha + n * pe.P - (n + 2) * s0);
            d.T_uu = (0.5 * lam * t2 * rho) * geom.g;
            d.T_urho = (-t) * p + (0.5 * lam * t2) * u_low;
            d.T_rhorho = 0.25 * lam * t2 * n * pe.P_rhorho;
            d.T_rhoS = 0.25 * lam * t2 * n * pe.P_rhoS;
            d.T_tu = (-1.0 * rho) * p + (lam * t * rho) * u_low;
            d.T_trho = -up + 0.5 * lam * t * (alpha + n * pe.P_rho);
            d.T_tS = 0.5 * lam * t * n * pe.P_S;
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += u[k] * H(j, k);
                d.covx_T_rho[j] = p[j] - t * s;
                for (int i = 0; i < n; ++i) d.covx_T_u(j, i) = -t * rho * H(j, i);
            }
            break;
        }
        case DensityVariant::NonIsentropicMomentum: {
            double fv = spec.f.value(S), f1 = spec.f.deriv(S);
            Mat Z = lowered_jacobian(geom, fd);
            Vec zl = lower(geom, fd.zeta);
            double uz = dot(u, zl);
            d.T = rho * uz * fv;
            d.T_u = (rho * fv) * zl;
            d.T_rho = uz * fv;
            d.T_S = rho * uz * f1;
            d.T_urho = fv * zl;
            d.T_uS = (rho * f1) * zl;
            d.T_rhoS = uz * f1;
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += u[k] * Z(j, k);
                d.covx_T_rho[j] = fv * s;
                d.covx_T_S[j] = rho * f1 * s;
                for (int i = 0; i < n; ++i) d.covx_T_u(j, i) = rho * fv * Z(j, i);
            }
            break;
        }
        case DensityVariant::NonIsentropicEnergy: {
            double fv = spec.f.value(S), f1 = spec.f.deriv(S);
            double PS1 = eos.pressure(1.0, S).P_S;
            double h = entropy_flux_potential(spec.f, eos, S);
            d.T = 0.5 * rho * alpha * fv - h;
            d.T_u = (rho * fv) * u_low;
            d.T_rho = 0.5 * alpha * fv;
            d.T_S = 0.5 * rho * alpha * f1 - fv * PS1;
            d.T_uu = (rho * fv) * geom.g;
            d.T_urho = fv * u_low;
            d.T_uS = (rho * f1) * u_low;
            d.T_rhoS = 0.5 * alpha * f1;
            break;
        }
    }
    // Every catalogued T has the shape rho * A(t,x,u,S) + B with B free of
    // explicit x, so nabla_i T = rho * nabla_i T_rho.
    for (int i = 0; i < n; ++i) d.covx_T[i] = rho * d.covx_T_rho[i];
    return d;
}

double density_value(const DensitySpec& spec, double t, const GeometryEval& geom,
                     const AttachedField& fd, const Vec& u, double rho, double S,
                     const Eos& eos) {
    return density_partials(spec, t, geom, fd, u, rho, S, eos).T;
}

FluxEval flux_eval(const DensitySpec& spec, double t, const GeometryEval& geom,
                   const AttachedField& fd, const Vec& u, double rho, double S,
                   const Eos& eos) {
    const int n = geom.g.n;
    FluxEval r;
    r.Phi = Vec(n);
    r.Phi_u = Mat(n);
    r.Phi_rho = Vec(n);
    r.Phi_S = Vec(n);

    switch (spec.variant) {
        case DensityVariant::Mass:
        case DensityVariant::VolumetricEntropy:
            break;  // zero flux: constants of motion on moving domains
        case DensityVariant::Energy: {
            PressureEval pe = eos.pressure(rho, S);
            r.Phi = pe.P * u;
            r.Phi_rho = pe.P_rho * u;
            r.Phi_S = pe.P_S * u;
            for (int i = 0; i < n; ++i) r.Phi_u(i, i) = pe.P;
            break;
        }
        case DensityVariant::Momentum: {
            PressureEval pe = eos.pressure(rho, S);
            Mat Z = lowered_jacobian(geom, fd);
            r.Phi = pe.P * fd.zeta;
            r.Phi_rho = pe.P_rho * fd.zeta;
            r.Phi_S = pe.P_S * fd.zeta;
            r.covx_div_Phi = pe.P * trace_up(geom, Z);
            break;
        }
        case DensityVariant::GalileanMomentum: {
            PressureEval pe = eos.pressure(rho, S);
            Mat H = covariant_hessian(geom, fd);
            Vec p_up = raise(geom, fd.pot_grad);
            r.Phi = (-t * pe.P) * p_up;
            r.Phi_rho = (-t * pe.P_rho) * p_up;
            r.Phi_S = (-t * pe.P_S) * p_up;
            r.covx_div_Phi = -t * pe.P * trace_up(geom, H);
            break;
        }
        case DensityVariant::SimilarityEnergy: {
            PressureEval pe = eos.pressure(rho, S);
            double lam = spec.lambda;
            Mat Z = lowered_jacobian(geom, fd);
            Vec dir = fd.zeta + (-lam * t) * u;
            r.Phi = pe.P * dir;
            r.Phi_rho = pe.P_rho * dir;
            r.Phi_S = pe.P_S * dir;
            for (int i = 0; i < n; ++i) r.Phi_u(i, i) = -lam * t * pe.P;
            r.covx_div_Phi = pe.P * trace_up(geom, Z);
            break;
        }
        case DensityVariant::GalileanEnergy: {
            PressureEval pe = eos.pressure(rho, S);
            double lam = spec.lambda;
            Mat H = covariant_hessian(geom, fd);
            Vec p_up = raise(geom, fd.pot_grad);
            Vec dir = (-t) * p_up + (0.5 * lam * t * t) * u;
            r.Phi = pe.P * dir;
            r.Phi_rho = pe.P_rho * dir;
            r.Phi_S = pe.P_S * dir;
            for (int i = 0; i < n; ++i) r.Phi_u(i, i) = 0.5 * lam * t * t * pe.P;
            r.covx_div_Phi = -t * pe.P * trace_up(geom, H);
            break;
        }
        case DensityVariant::NonIsentropicMomentum: {
            double h = entropy_flux_potential(spec.f, eos, S);
            double h1 = spec.f.value(S) * eos.pressure(1.0, S).P_S;
            Mat Z = lowered_jacobian(geom, fd);
            r.Phi = h * fd.zeta;
            r.Phi_S = h1 * fd.zeta;
            r.covx_div_Phi = h * trace_up(geom, Z);
            break;
        }
        case DensityVariant::NonIsentropicEnergy: {
            double h = entropy_flux_potential(spec.f, eos, S);
            double h1 = spec.f.value(S) * eos.pressure(1.0, S).P_S;
            r.Phi = h * u;
            r.Phi_S = h1 * u;
            for (int i = 0; i < n; ++i) r.Phi_u(i, i) = h;
            break;
        }
    }
    return r;
}

Vec flux_vector(const DensitySpec& spec, double t, const GeometryEval& geom,
                const AttachedField& fd, const Vec& u, double rho, double S, const Eos& eos) {
    return flux_eval(spec, t, geom, fd, u, rho, S, eos).Phi;
}

}  // namespace kinlab
