#include <doctest.h>

#include "kinlab/densities.hpp"
#include "kinlab/jet.hpp"

#include <cmath>

using namespace kinlab;

namespace {

DensitySpec make_spec(DensityVariant v) {
    DensitySpec s;
    s.variant = v;
    return s;
}

// Forward-difference probe of the analytic partial tables through the value
// function, in every jet coordinate the tables cover.
void probe_partials(const DensitySpec& spec, const ChartMetric& chart, const Eos& eos,
                    const JetPoint& jet) {
    AttachedField fd = eval_attached(spec, chart, jet.x);
    auto value = [&](double t, const Vec& u, double rho, double S) {
        return density_value(spec, t, jet.geom, fd, u, rho, S, eos);
    };
    DensityPartials d = spec_partials_at(spec, chart, jet, eos);
    const double h = 1e-6;
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
    };

    CHECK(close(d.T, value(jet.t, jet.u, jet.rho, jet.S)));
    CHECK(close(d.T_t, (value(jet.t + h, jet.u, jet.rho, jet.S) -
                        value(jet.t - h, jet.u, jet.rho, jet.S)) /
                           (2 * h)));
    CHECK(close(d.T_rho, (value(jet.t, jet.u, jet.rho + h, jet.S) -
                          value(jet.t, jet.u, jet.rho - h, jet.S)) /
                             (2 * h)));
    CHECK(close(d.T_S, (value(jet.t, jet.u, jet.rho, jet.S + h) -
                        value(jet.t, jet.u, jet.rho, jet.S - h)) /
                           (2 * h)));
    for (int i = 0; i < jet.x.n; ++i) {
        Vec up = jet.u, um = jet.u;
        up[i] += h;
        um[i] -= h;
        CHECK(close(d.T_u[i],
                    (value(jet.t, up, jet.rho, jet.S) - value(jet.t, um, jet.rho, jet.S)) /
                        (2 * h)));
        // second partials via first-partial probes of the table itself
        JetPoint jp = jet, jm = jet;
        jp.u = up;
        jm.u = um;
        DensityPartials dp = spec_partials_at(spec, chart, jp, eos);
        DensityPartials dm = spec_partials_at(spec, chart, jm, eos);
        for (int j = 0; j < jet.x.n; ++j)
            CHECK(close(d.T_uu(i, j), (dp.T_u[j] - dm.T_u[j]) / (2 * h)));
        CHECK(close(d.T_urho[i], (dp.T_rho - dm.T_rho) / (2 * h)));
        CHECK(close(d.T_uS[i], (dp.T_S - dm.T_S) / (2 * h)));
        CHECK(close(d.T_tu[i], (dp.T_t - dm.T_t) / (2 * h)));
    }
    {
        JetPoint jp = jet, jm = jet;
        jp.rho += h;
        jm.rho -= h;
        DensityPartials dp = spec_partials_at(spec, chart, jp, eos);
        DensityPartials dm = spec_partials_at(spec, chart, jm, eos);
        CHECK(close(d.T_rhorho, (dp.T_rho - dm.T_rho) / (2 * h)));
        CHECK(close(d.T_trho, (dp.T_t - dm.T_t) / (2 * h)));
        JetPoint sp = jet, sm = jet;
        sp.S += h;
        sm.S -= h;
        DensityPartials dsp = spec_partials_at(spec, chart, sp, eos);
        DensityPartials dsm = spec_partials_at(spec, chart, sm, eos);
        CHECK(close(d.T_rhoS, (dsp.T_rho - dsm.T_rho) / (2 * h)));
        CHECK(close(d.T_tS, (dsp.T_t - dsm.T_t) / (2 * h)));
    }
    // Explicit-x covariant derivatives against finite differences in x. The
    // jet coordinate u is a vector: it is parallel-transported to the probe
    // points (its covariant derivative enters through the chain rule, not
    // through the explicit part), and the free covector index of T_u gets the
    // usual connection correction.
    for (int j = 0; j < jet.x.n; ++j) {
        double hx = 1e-6;
        Vec xp = jet.x, xm = jet.x;
        xp[j] += hx;
        xm[j] -= hx;
        Vec up = jet.u, um = jet.u;
        for (int i = 0; i < jet.x.n; ++i)
            for (int m = 0; m < jet.x.n; ++m) {
                up[i] -= hx * jet.geom.christoffel(i, j, m) * jet.u[m];
                um[i] += hx * jet.geom.christoffel(i, j, m) * jet.u[m];
            }
        GeometryEval gp = geometry_at(chart, xp), gm = geometry_at(chart, xm);
        AttachedField fp = eval_attached(spec, chart, xp), fm = eval_attached(spec, chart, xm);
        DensityPartials dp = density_partials(spec, jet.t, gp, fp, up, jet.rho, jet.S, eos);
        DensityPartials dm = density_partials(spec, jet.t, gm, fm, um, jet.rho, jet.S, eos);
        // scalars: covariant = coordinate derivative
        CHECK(std::abs(d.covx_T[j] - (dp.T - dm.T) / (2 * hx)) < 2e-5);
        CHECK(std::abs(d.covx_T_rho[j] - (dp.T_rho - dm.T_rho) / (2 * hx)) < 2e-5);
        CHECK(std::abs(d.covx_T_S[j] - (dp.T_S - dm.T_S) / (2 * hx)) < 2e-5);
        // covector: nabla_j T_{u^i} = d_j T_{u^i} - Gamma^k_{ji} T_{u^k}
        for (int i = 0; i < jet.x.n; ++i) {
            double cd = (dp.T_u[i] - dm.T_u[i]) / (2 * hx);
            for (int k = 0; k < jet.x.n; ++k)
                cd -= jet.geom.christoffel(k, j, i) * d.T_u[k];
            CHECK(std::abs(d.covx_T_u(j, i) - cd) < 2e-5);
        }
    }
}

}  // namespace

TEST_CASE("density values: frozen examples") {
    ChartMetric flat = make_chart("flat_torus", 2);
    GeometryEval ge = geometry_at(flat, Vec(0.0, 0.0));
    AttachedField none;

    SUBCASE("mass") {
        Eos eos = Eos::barotropic(1.0, 2.0);
        DensitySpec m = make_spec(DensityVariant::Mass);
        CHECK(density_value(m, 0.0, ge, none, Vec(0.0, 0.0), 2.0, 0.0, eos) ==
              doctest::Approx(2.0));
    }
    SUBCASE("energy with polytropic sigma=1, gamma=2") {
        Eos eos = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
        DensitySpec e = make_spec(DensityVariant::Energy);
        // rho (|u|^2/2 + e) = 2 (12.5 + 2) = 29
        CHECK(density_value(e, 0.0, ge, none, Vec(3.0, 4.0), 2.0, 0.1, eos) ==
              doctest::Approx(29.0));
    }
    SUBCASE("similarity energy on the flat patch") {
        ChartMetric patch = make_chart("flat_patch", 2);
        Eos eos = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
        DensitySpec s = make_spec(DensityVariant::SimilarityEnergy);
        s.field = radial_field(2);
        s.lambda = 2.0;
        Vec x(0.8, -0.4);
        GeometryEval gp = geometry_at(patch, x);
        AttachedField fd = eval_attached(s, patch, x);
        // rho g(u,xi) - lambda t (rho g(u,u) + n P)/2 = x1 - 3 at u=(1,0), rho=1, t=1
        CHECK(density_value(s, 1.0, gp, fd, Vec(1.0, 0.0), 1.0, 0.0, eos) ==
              doctest::Approx(x[0] - 3.0));
    }
}

TEST_CASE("flux vectors: frozen examples") {
    ChartMetric flat = make_chart("flat_torus", 2);
    GeometryEval ge = geometry_at(flat, Vec(0.2, 0.1));
    AttachedField none;

    SUBCASE("mass flux is identically zero") {
        Eos eos = Eos::barotropic(1.0, 2.0);
        DensitySpec m = make_spec(DensityVariant::Mass);
        Vec phi = flux_vector(m, 0.0, ge, none, Vec(1.0, 2.0), 1.5, 0.3, eos);
        CHECK(phi.max_abs() == 0.0);
    }
    SUBCASE("energy flux is P u") {
        // P = 4 at rho = 2 with sigma = 1, gamma = 2
        Eos eos = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
        DensitySpec e = make_spec(DensityVariant::Energy);
        Vec phi = flux_vector(e, 0.0, ge, none, Vec(3.0, 4.0), 2.0, 0.0, eos);
        CHECK(phi[0] == doctest::Approx(12.0));
        CHECK(phi[1] == doctest::Approx(16.0));
    }
    SUBCASE("non-isentropic momentum flux h(S) zeta with h = S^2/2") {
        Eos eos = Eos::isobaric_entropy(ExprFn::poly({0.0, 1.0}));
        DensitySpec m = make_spec(DensityVariant::NonIsentropicMomentum);
        m.field = axis_field(2, 0);
        m.f = ExprFn::poly({0.0, 1.0});
        AttachedField fd = eval_attached(m, flat, Vec(0.2, 0.1));
        Vec phi = flux_vector(m, 0.0, ge, fd, Vec(0.5, -0.2), 1.0, 2.0, eos);
        CHECK(phi[0] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(phi[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("analytic partial tables agree with finite-difference probes") {
    ChartMetric torus = make_chart("torus_rev", 2);
    ChartMetric patch = make_chart("flat_patch", 2);
    Eos general = Eos::general_power(0.9, 1.4, ExprFn::poly({1.0, 0.2}), 0.1, 2.1);
    Eos poly = Eos::polytropic(ExprFn::poly({1.0, 0.3}), 2.0, 0.2);
    Eos isob = Eos::isobaric_entropy(ExprFn::poly({0.0, 1.0, 0.3}));

    auto jets_torus = sample_jets(torus, 4, 2024, 1);
    auto jets_patch = sample_jets(patch, 4, 2025, 1);

    // EOS-independent and curved-chart variants on the torus of revolution
    for (const JetPoint& jet : jets_torus) {
        probe_partials(make_spec(DensityVariant::Mass), torus, general, jet);
        DensitySpec vol = make_spec(DensityVariant::VolumetricEntropy);
        vol.f = ExprFn::sin(0.7, 1.3, 0.2);
        probe_partials(vol, torus, general, jet);
        probe_partials(make_spec(DensityVariant::Energy), torus, general, jet);
        DensitySpec mom = make_spec(DensityVariant::Momentum);
        mom.field = axis_field(2, 1);
        probe_partials(mom, torus, general, jet);
        DensitySpec nim = make_spec(DensityVariant::NonIsentropicMomentum);
        nim.field = axis_field(2, 1);
        nim.f = ExprFn::poly({0.2, 1.0});
        probe_partials(nim, torus, isob, jet);
        DensitySpec nie = make_spec(DensityVariant::NonIsentropicEnergy);
        nie.f = ExprFn::poly({0.2, 1.0});
        probe_partials(nie, torus, isob, jet);
    }
    // Galilean / homothety variants on the flat patch
    for (const JetPoint& jet : jets_patch) {
        DensitySpec gm = make_spec(DensityVariant::GalileanMomentum);
        gm.field = linear_potential_field(Vec(0.6, -0.2));
        probe_partials(gm, patch, poly, jet);
        DensitySpec se = make_spec(DensityVariant::SimilarityEnergy);
        se.field = radial_field(2);
        se.lambda = 2.0;
        probe_partials(se, patch, poly, jet);
        DensitySpec gal = make_spec(DensityVariant::GalileanEnergy);
        gal.field = quadratic_potential_field(2, 1.0);
        gal.lambda = 2.0;
        probe_partials(gal, patch, poly, jet);
    }
}

TEST_CASE("flux partial tables agree with finite differences") {
    ChartMetric torus = make_chart("torus_rev", 2);
    Eos general = Eos::general_power(0.9, 1.4, ExprFn::poly({1.0, 0.2}));
    auto jets = sample_jets(torus, 3, 77, 1);
    DensitySpec specs[2];
    specs[0] = make_spec(DensityVariant::Energy);
    specs[1] = make_spec(DensityVariant::Momentum);
    specs[1].field = axis_field(2, 1);
    for (const JetPoint& jet : jets)
        for (const DensitySpec& spec : specs) {
            AttachedField fd = eval_attached(spec, torus, jet.x);
            FluxEval fe = flux_eval(spec, jet.t, jet.geom, fd, jet.u, jet.rho, jet.S, general);
            double h = 1e-6;
            auto phi_at = [&](const Vec& u, double rho, double S) {
                return flux_vector(spec, jet.t, jet.geom, fd, u, rho, S, general);
            };
            Vec pr = phi_at(jet.u, jet.rho + h, jet.S) - phi_at(jet.u, jet.rho - h, jet.S);
            Vec pS = phi_at(jet.u, jet.rho, jet.S + h) - phi_at(jet.u, jet.rho, jet.S - h);
            for (int i = 0; i < 2; ++i) {
                CHECK(fe.Phi_rho[i] == doctest::Approx(pr[i] / (2 * h)).epsilon(1e-5));
                CHECK(fe.Phi_S[i] == doctest::Approx(pS[i] / (2 * h)).epsilon(1e-5));
            }
            for (int k = 0; k < 2; ++k) {
                Vec up = jet.u, um = jet.u;
                up[k] += h;
                um[k] -= h;
                Vec pu = phi_at(up, jet.rho, jet.S) - phi_at(um, jet.rho, jet.S);
                for (int i = 0; i < 2; ++i)
                    CHECK(fe.Phi_u(i, k) == doctest::Approx(pu[i] / (2 * h)).epsilon(1e-5));
            }
        }
}

TEST_CASE("spec validation names the violated condition") {
    ChartMetric torus = make_chart("torus_rev", 2);
    Eos poly = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
    Eos general = Eos::general_power(1.0, 1.4, ExprFn::poly({1.0, 0.1}));

    DensitySpec mom = make_spec(DensityVariant::Momentum);
    mom.field = axis_field(2, 0);  // d/dr is not Killing on the torus of revolution
    CHECK_THROWS_AS(mom.validate(torus, poly), ClassificationError);

    DensitySpec sim = make_spec(DensityVariant::SimilarityEnergy);
    sim.field = radial_field(2);
    sim.lambda = 2.0;
    ChartMetric patch = make_chart("flat_patch", 2);
    CHECK_THROWS_AS(sim.validate(patch, general), ClassificationError);  // wrong EOS class
    CHECK_NOTHROW(sim.validate(patch, poly));

    DensitySpec nie = make_spec(DensityVariant::NonIsentropicEnergy);
    nie.f = ExprFn::poly({0.0, 1.0});
    CHECK_THROWS_AS(nie.validate(patch, poly), ClassificationError);
    Eos isob = Eos::isobaric_entropy(ExprFn::poly({0.0, 1.0}));
    CHECK_NOTHROW(nie.validate(patch, isob));

    DensitySpec vol = make_spec(DensityVariant::VolumetricEntropy);
    vol.f = ExprFn::constant(2.0);
    CHECK_THROWS_AS(vol.validate(patch, poly), ClassificationError);
}
