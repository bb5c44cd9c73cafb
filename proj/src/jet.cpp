#include "kinlab/jet.hpp"

#include <cmath>

namespace kinlab {

double JetPoint::u2_full(int i, int j, int k) const {
    double anti = 0;
    for (int l = 0; l < x.n; ++l) anti += geom.riemann(j, k, l, i) * u[l];
    return u2sym(i, j, k) - 0.5 * anti;
}

std::vector<JetPoint> sample_jets(const ChartMetric& chart, int count, std::uint64_t seed,
                                  int order) {
    const int n = chart.dim;
    std::vector<JetPoint> jets(count);
    parallel_for(std::size_t(count), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            Rng rng(seed, k);
            JetPoint& j = jets[k];
            j.order = order;
            j.x = Vec(n);
            for (int d = 0; d < n; ++d) {
                double pad = chart.periodic[d]
                                 ? 0.0
                                 : std::max(0.05 * chart.extent(d), 4.0 * chart.h_geom(d));
                j.x[d] = rng.uniform(chart.lo[d] + pad, chart.hi[d] - pad);
            }
            j.t = rng.uniform(0.0, 1.0);
            j.u = Vec(n);
            for (int d = 0; d < n; ++d) j.u[d] = rng.normal();
            j.rho = rng.uniform(0.5, 2.0);
            j.S = rng.uniform(-1.0, 1.0);
            j.grad_u = Mat(n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) j.grad_u(a, b) = rng.normal();
            j.grad_rho = Vec(n);
            j.grad_S = Vec(n);
            for (int d = 0; d < n; ++d) {
                j.grad_rho[d] = 0.5 * rng.normal();
                j.grad_S[d] = 0.5 * rng.normal();
            }
            if (order >= 2) {
                j.u2sym = Ten3(n);
                j.rho2 = Mat(n);
                j.S2 = Mat(n);
                for (int i = 0; i < n; ++i)
                    for (int a = 0; a < n; ++a)
                        for (int b = a; b < n; ++b) {
                            double v = rng.normal();
                            j.u2sym(i, a, b) = v;
                            j.u2sym(i, b, a) = v;
                        }
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b) {
                        double v1 = 0.5 * rng.normal(), v2 = 0.5 * rng.normal();
                        j.rho2(a, b) = j.rho2(b, a) = v1;
                        j.S2(a, b) = j.S2(b, a) = v2;
                    }
                j.geom = geometry_with_curvature(chart, j.x);
            } else {
                j.geom = geometry_at(chart, j.x);
            }
        }
    });
    return jets;
}

namespace {

struct JetAux {
    int n;
    double divu;          // nabla_i u^i
    Vec grad_rho_up, grad_S_up;  // raised gradients
    Mat grad_u_up;        // (i,j) -> nabla^i u^j
    double div_rho_u;     // nabla_i (rho u^i)
    double u_dot_gradS;
};

JetAux jet_aux(const JetPoint& jet) {
    JetAux a;
    const int n = jet.x.n;
    a.n = n;
    a.divu = 0;
    for (int i = 0; i < n; ++i) a.divu += jet.grad_u(i, i);
    a.grad_rho_up = mat_vec(jet.geom.g_inv, jet.grad_rho);
    a.grad_S_up = mat_vec(jet.geom.g_inv, jet.grad_S);
    a.grad_u_up = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += jet.geom.g_inv(i, k) * jet.grad_u(j, k);
            a.grad_u_up(i, j) = s;
        }
    a.div_rho_u = jet.rho * a.divu + dot(jet.u, jet.grad_rho);
    a.u_dot_gradS = dot(jet.u, jet.grad_S);
    return a;
}

// nabla^i T_{u^i} = g^{ij} nabla_j T_{u^i}
double div_Tu_up(const DensityPartials& d, const GeometryEval& geom) {
    double s = 0;
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) s += geom.g_inv(i, j) * d.covx_T_u(j, i);
    return s;
}

}  // namespace

double material_time_derivative(const DensityPartials& d, const JetPoint& jet, const Eos& eos) {
    JetAux a = jet_aux(jet);
    PressureEval pe = eos.pressure(jet.rho, jet.S);
    double r = d.T_t;
    for (int i = 0; i < a.n; ++i) {
        double accel = 0;
        for (int j = 0; j < a.n; ++j) accel += jet.u[j] * jet.grad_u(i, j);
        accel += (pe.P_rho * a.grad_rho_up[i] + pe.P_S * a.grad_S_up[i]) / jet.rho;
        r -= d.T_u[i] * accel;
    }
    r -= d.T_rho * a.div_rho_u;
    r -= d.T_S * a.u_dot_gradS;
    return r;
}

EulerResiduals euler_residuals(const DensityPartials& d, const JetPoint& jet, const Eos& eos) {
    const int n = d.n;
    JetAux a = jet_aux(jet);
    PressureEval pe = eos.pressure(jet.rho, jet.S);
    const double rho = jet.rho;
    double divTu = div_Tu_up(d, jet.geom);

    double Tuu_gradu = 0;  // T_{u^i u^j} nabla^i u^j
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Tuu_gradu += d.T_uu(i, j) * a.grad_u_up(i, j);

    Vec combo(n);  // rho P_rho T_{u^k S} - rho P_S T_{u^k rho} + P_S T_{u^k}
    for (int k = 0; k < n; ++k)
        combo[k] = rho * pe.P_rho * d.T_uS[k] - rho * pe.P_S * d.T_urho[k] +
                   pe.P_S * d.T_u[k];

    EulerResiduals r;
    r.E_rho = d.T_trho + dot(jet.u, d.covx_T_rho) + pe.P_rho / rho * divTu -
              rho * d.T_rhorho * a.divu + pe.P_rho / rho * Tuu_gradu +
              dot(combo, a.grad_S_up) / (rho * rho);

    r.E_S = d.T_tS + dot(jet.u, d.covx_T_S) + pe.P_S / rho * divTu -
            dot(combo, a.grad_rho_up) / (rho * rho) + pe.P_S / rho * Tuu_gradu +
            (d.T_S - rho * d.T_rhoS) * a.divu;

    r.E_u = Vec(n);
    for (int i = 0; i < n; ++i) {
        double s = d.T_tu[i] + rho * d.covx_T_rho[i];
        for (int j = 0; j < n; ++j) s += jet.u[j] * d.covx_T_u(j, i);
        s += rho * d.T_rhorho * jet.grad_rho[i];
        for (int j = 0; j < n; ++j)
            s -= d.T_uu(i, j) * (pe.P_rho * a.grad_rho_up[j] + pe.P_S * a.grad_S_up[j]) / rho;
        s += (rho * d.T_rhoS - d.T_S) * jet.grad_S[i];
        s += (d.T_u[i] - rho * d.T_urho[i]) * a.divu;
        for (int j = 0; j < n; ++j)
            s += (rho * d.T_urho[j] - d.T_u[j]) * jet.grad_u(j, i);
        r.E_u[i] = s;
    }
    return r;
}

std::array<double, 7> DeterminingResiduals::max_abs() const {
    std::array<double, 7> m{};
    m[0] = std::abs(t1);
    m[1] = t2.max_abs();
    m[2] = t3.max_abs();
    m[3] = std::abs(t4);
    m[4] = t5.max_abs();
    m[5] = t6.max_abs();
    double w = 0;
    for (int j = 0; j < t3.n; ++j)
        for (int k = 0; k < t3.n; ++k)
            for (int i = 0; i < t3.n; ++i) w = std::max(w, std::abs(t7(j, k, i)));
    m[6] = w;
    return m;
}

double DeterminingResiduals::worst() const {
    double w = 0;
    for (double v : max_abs()) w = std::max(w, v);
    return w;
}

DeterminingResiduals determining_system_residuals(const DensityPartials& d, const JetPoint& jet,
                                                  const Eos& eos) {
    const int n = d.n;
    PressureEval pe = eos.pressure(jet.rho, jet.S);
    const double rho = jet.rho;
    const Mat& g = jet.geom.g;
    double divTu = div_Tu_up(d, jet.geom);

    DeterminingResiduals r;
    r.t1 = d.T_trho + dot(jet.u, d.covx_T_rho) + pe.P_rho / rho * divTu;
    r.t4 = d.T_tS + dot(jet.u, d.covx_T_S) + pe.P_S / rho * divTu;
    r.t2 = Vec(n);
    r.t6 = Vec(n);
    for (int k = 0; k < n; ++k) {
        r.t2[k] = rho * pe.P_rho * d.T_uS[k] - rho * pe.P_S * d.T_urho[k] +
                  pe.P_S * d.T_u[k];
        double s = d.T_tu[k] + rho * d.covx_T_rho[k];
        for (int j = 0; j < n; ++j) s += jet.u[j] * d.covx_T_u(j, k);
        r.t6[k] = s;
    }
    r.t3 = Mat(n);
    r.t5 = Mat(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            r.t3(j, k) = rho * rho * d.T_rhorho * g(j, k) - pe.P_rho * d.T_uu(j, k);
            r.t5(j, k) = pe.P_S / rho * d.T_uu(j, k) + g(j, k) * (d.T_S - rho * d.T_rhoS);
        }
    r.t7 = Ten3(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                r.t7(j, k, i) = g(j, k) * (d.T_u[i] - rho * d.T_urho[i]) +
                                g(i, j) * (rho * d.T_urho[k] - d.T_u[k]);
    return r;
}

double flux_consistency(const DensityPartials& d, const FluxEval& flux, const JetPoint& jet,
                        const Eos& eos) {
    const int n = d.n;
    JetAux a = jet_aux(jet);
    double DtT = material_time_derivative(d, jet, eos);

    // Div(T u) = T div u + u^i D_i T
    double div_T_u = d.T * a.divu;
    for (int i = 0; i < n; ++i) {
        double DiT = d.covx_T[i] + d.T_rho * jet.grad_rho[i] + d.T_S * jet.grad_S[i];
        for (int k = 0; k < n; ++k) DiT += d.T_u[k] * jet.grad_u(k, i);
        div_T_u += jet.u[i] * DiT;
    }

    double div_Phi = flux.covx_div_Phi;
    for (int i = 0; i < n; ++i) {
        div_Phi += flux.Phi_rho[i] * jet.grad_rho[i] + flux.Phi_S[i] * jet.grad_S[i];
        for (int k = 0; k < n; ++k) div_Phi += flux.Phi_u(i, k) * jet.grad_u(k, i);
    }
    return DtT + div_T_u + div_Phi;
}

Mat oneform_residual(const JetPoint& jet, const Eos& eos) {
    if (jet.order < 2)
        throw NumericError("oneform_residual needs an order-2 jet");
    const int n = jet.x.n;
    const Mat& g = jet.geom.g;
    const Mat& ginv = jet.geom.g_inv;
    JetAux a = jet_aux(jet);
    PressureEval pe = eos.pressure(jet.rho, jet.S);
    const double rho = jet.rho;

    // omega(j,i) = nabla_j u_i - nabla_i u_j
    Mat omega(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int k = 0; k < n; ++k)
                s += g(i, k) * jet.grad_u(k, j) - g(j, k) * jet.grad_u(k, i);
            omega(j, i) = s;
        }

    // A(k,j) = nabla_j of the velocity equation right side.
    double crho_rho = -pe.P_rho / (rho * rho) + pe.P_rhorho / rho;
    double crho_S = pe.P_rhoS / rho;
    double cS_rho = -pe.P_S / (rho * rho) + pe.P_rhoS / rho;
    double cS_S = pe.P_SS / rho;
    Mat A(n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int l = 0; l < n; ++l)
                s -= jet.grad_u(l, j) * jet.grad_u(k, l) + jet.u[l] * jet.u2_full(k, j, l);
            double dj_crho = crho_rho * jet.grad_rho[j] + crho_S * jet.grad_S[j];
            double dj_cS = cS_rho * jet.grad_rho[j] + cS_S * jet.grad_S[j];
            s -= dj_crho * a.grad_rho_up[k] + dj_cS * a.grad_S_up[k];
            double lap_rho = 0, lap_S = 0;
            for (int m = 0; m < n; ++m) {
                lap_rho += ginv(k, m) * jet.rho2(j, m);
                lap_S += ginv(k, m) * jet.S2(j, m);
            }
            s -= pe.P_rho / rho * lap_rho + pe.P_S / rho * lap_S;
            A(k, j) = s;
        }

    // Residual(j,i) = D_t omega_{ji} + D_j (u . omega)_i - D_i (u . omega)_j
    auto Domega = [&](int j, int k, int i) {
        // total derivative of omega_{ki} in direction j
        double s = 0;
        for (int m = 0; m < n; ++m)
            s += g(i, m) * jet.u2_full(m, j, k) - g(k, m) * jet.u2_full(m, j, i);
        return s;
    };
    Mat res(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double dt = 0;
            for (int k = 0; k < n; ++k) dt += g(i, k) * A(k, j) - g(j, k) * A(k, i);
            double s = dt;
            for (int k = 0; k < n; ++k) {
                s += jet.grad_u(k, j) * omega(k, i) - jet.grad_u(k, i) * omega(k, j);
                s += jet.u[k] * (Domega(j, k, i) - Domega(i, k, j));
            }
            res(j, i) = s;
        }
    return res;
}

Mat oneform_residual_expected(const JetPoint& jet, const Eos& eos) {
    const int n = jet.x.n;
    PressureEval pe = eos.pressure(jet.rho, jet.S);
    Mat r(n);
    double c = pe.P_S / (jet.rho * jet.rho);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            r(j, i) = c * (jet.grad_rho[j] * jet.grad_S[i] - jet.grad_rho[i] * jet.grad_S[j]);
    return r;
}

DensityPartials spec_partials_at(const DensitySpec& spec, const ChartMetric& chart,
                                 const JetPoint& jet, const Eos& eos) {
    AttachedField fd = eval_attached(spec, chart, jet.x);
    return density_partials(spec, jet.t, jet.geom, fd, jet.u, jet.rho, jet.S, eos);
}

FluxEval spec_flux_at(const DensitySpec& spec, const ChartMetric& chart, const JetPoint& jet,
                      const Eos& eos) {
    AttachedField fd = eval_attached(spec, chart, jet.x);
    return flux_eval(spec, jet.t, jet.geom, fd, jet.u, jet.rho, jet.S, eos);
}

EulerResiduals spec_euler_residuals(const DensitySpec& spec, const ChartMetric& chart,
                                    const JetPoint& jet, const Eos& eos) {
    return euler_residuals(spec_partials_at(spec, chart, jet, eos), jet, eos);
}

// ---------------------------------------------------------------------------
// Divergence expressions
// ---------------------------------------------------------------------------

double DivergenceExpression::value(const ChartMetric& chart, const JetPoint& jet) const {
    const int n = jet.x.n;
    Vec av = a.value(jet.x);
    Mat da = a.deriv ? a.deriv(jet.x) : a.deriv_at(chart, jet.x);
    double diva = 0;
    for (int i = 0; i < n; ++i) {
        diva += da(i, i);
        for (int k = 0; k < n; ++k) diva += jet.geom.christoffel(i, i, k) * av[k];
    }
    double pv = p.value(jet.rho), qv = q.value(jet.S);
    double lin = c0 + dot(c, jet.u);
    double f = diva * pv * qv * lin;
    for (int i = 0; i < n; ++i) {
        double dphi = p.deriv(jet.rho) * qv * lin * jet.grad_rho[i] +
                      pv * q.deriv(jet.S) * lin * jet.grad_S[i];
        for (int k = 0; k < n; ++k) dphi += pv * qv * c[k] * jet.grad_u(k, i);
        f += av[i] * dphi;
    }
    return f;
}

EulerResiduals euler_ops_of_divergence(const DivergenceExpression& expr,
                                       const ChartMetric& chart, const JetPoint& jet) {
    const int n = jet.x.n;
    // Derivative parts by 4th-order central differences in the jet coordinates.
    auto fd5 = [&](const std::function<double(double)>& f, double h) {
        return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
    };
    const double h = 1e-4;
    auto with_rho = [&](double d) {
        JetPoint j2 = jet;
        j2.rho += d;
        return expr.value(chart, j2);
    };
    auto with_S = [&](double d) {
        JetPoint j2 = jet;
        j2.S += d;
        return expr.value(chart, j2);
    };

    Vec av = expr.a.value(jet.x);
    Mat da = expr.a.deriv ? expr.a.deriv(jet.x) : expr.a.deriv_at(chart, jet.x);
    double pv = expr.p.value(jet.rho), p1 = expr.p.deriv(jet.rho);
    double qv = expr.q.value(jet.S), q1 = expr.q.deriv(jet.S);
    double lin = expr.c0 + dot(expr.c, jet.u);
    double diva = 0;
    for (int i = 0; i < n; ++i) {
        diva += da(i, i);
        for (int k = 0; k < n; ++k) diva += jet.geom.christoffel(i, i, k) * av[k];
    }

    // D_i(Theta^i_v): Theta^i_rho = a^i p' q lin etc.; total derivative through
    // explicit x (covariant divergence of a) and the jet chain rule.
    auto total_div = [&](double prho, double pS, bool u_dep, int u_comp) {
        // phi-factor partials of Theta^i = a^i * phi with phi as selected:
        //   prho-branch: phi = p' q lin ; pS-branch: phi = p q' lin ;
        //   u-branch: phi = p q c_k (constant in u).
        double phi, phi_rho, phi_S;
        Vec phi_u(n);
        if (u_dep) {
            phi = pv * qv * expr.c[u_comp];
            phi_rho = p1 * qv * expr.c[u_comp];
            phi_S = pv * q1 * expr.c[u_comp];
        } else if (prho != 0) {
            phi = p1 * qv * lin;
            phi_rho = expr.p.deriv2(jet.rho) * qv * lin;
            phi_S = p1 * q1 * lin;
            for (int k = 0; k < n; ++k) phi_u[k] = p1 * qv * expr.c[k];
        } else {
            (void)pS;
            phi = pv * q1 * lin;
            phi_rho = p1 * q1 * lin;
            phi_S = pv * expr.q.deriv2(jet.S) * lin;
            for (int k = 0; k < n; ++k) phi_u[k] = pv * q1 * expr.c[k];
        }
        double s = diva * phi;
        for (int i = 0; i < n; ++i) {
            double chain = phi_rho * jet.grad_rho[i] + phi_S * jet.grad_S[i];
            for (int k = 0; k < n; ++k) chain += phi_u[k] * jet.grad_u(k, i);
            s += av[i] * chain;
        }
        return s;
    };

    EulerResiduals r;
    r.E_rho = fd5(with_rho, h) - total_div(1, 0, false, 0);
    r.E_S = fd5(with_S, h) - total_div(0, 1, false, 0);
    r.E_u = Vec(n);
    for (int k = 0; k < n; ++k) {
        auto with_u = [&](double d) {
            JetPoint j2 = jet;
            j2.u[k] += d;
            return expr.value(chart, j2);
        };
        r.E_u[k] = fd5(with_u, h) - total_div(0, 0, true, k);
    }
    return r;
}

}  // namespace kinlab
