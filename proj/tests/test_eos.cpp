#include <doctest.h>

#include "kinlab/eos.hpp"

#include <cmath>

using namespace kinlab;

TEST_CASE("pressure values per variant") {
    SUBCASE("polytropic with the dimension-dependent exponent, n = 2") {
        Eos eos = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
        PressureEval p = eos.pressure(2.0, 0.3);
        CHECK(p.P == doctest::Approx(4.0));
        CHECK(p.P_rho == doctest::Approx(4.0));
        CHECK(p.P_S == doctest::Approx(0.0));
        CHECK(eos.polytropic_special_exponent(2));
        CHECK_FALSE(eos.polytropic_special_exponent(3));
    }
    SUBCASE("isobaric entropy kappa(S) = S") {
        Eos eos = Eos::isobaric_entropy(ExprFn::poly({0.0, 1.0}));
        PressureEval p = eos.pressure(5.0, 3.0);
        CHECK(p.P == doctest::Approx(3.0));
        CHECK(p.P_rho == doctest::Approx(0.0));
        CHECK(p.P_S == doctest::Approx(1.0));
        CHECK(eos.isobaric_predicate());
    }
    SUBCASE("barotropic P = rho") {
        Eos eos = Eos::barotropic(1.0, 1.0);
        PressureEval p = eos.pressure(7.0, -0.2);
        CHECK(p.P == doctest::Approx(7.0));
        CHECK(p.P_rho == doctest::Approx(1.0));
        CHECK(p.P_S == doctest::Approx(0.0));
        CHECK(eos.barotropic_predicate());
    }
    SUBCASE("rho <= 0 is a state error") {
        Eos eos = Eos::barotropic(1.0, 2.0);
        CHECK_THROWS_AS(eos.pressure(0.0, 0.0), StateError);
        CHECK_THROWS_AS(eos.pressure(-1.0, 0.0), StateError);
    }
    SUBCASE("pressure partials agree with central differences") {
        Eos eos = Eos::general_power(0.8, 1.4, ExprFn::poly({1.0, 0.0, 0.1}), 0.2, 2.0);
        double rho = 1.3, S = 0.4, h = 1e-5;
        PressureEval p = eos.pressure(rho, S);
        double fd_rho = (eos.pressure(rho + h, S).P - eos.pressure(rho - h, S).P) / (2 * h);
        double fd_S = (eos.pressure(rho, S + h).P - eos.pressure(rho, S - h).P) / (2 * h);
        CHECK(p.P_rho == doctest::Approx(fd_rho).epsilon(1e-6));
        CHECK(p.P_S == doctest::Approx(fd_S).epsilon(1e-6));
        double fd_rr =
            (eos.pressure(rho + h, S).P_rho - eos.pressure(rho - h, S).P_rho) / (2 * h);
        double fd_rS = (eos.pressure(rho, S + h).P_rho - eos.pressure(rho, S - h).P_rho) / (2 * h);
        double fd_SS = (eos.pressure(rho, S + h).P_S - eos.pressure(rho, S - h).P_S) / (2 * h);
        CHECK(p.P_rhorho == doctest::Approx(fd_rr).epsilon(1e-6));
        CHECK(p.P_rhoS == doctest::Approx(fd_rS).epsilon(1e-6));
        CHECK(p.P_SS == doctest::Approx(fd_SS).epsilon(1e-6));
    }
}

TEST_CASE("internal energy closed forms") {
    SUBCASE("polytropic: e = sigma rho^(gamma-1)/(gamma-1)") {
        Eos eos = Eos::polytropic(ExprFn::constant(1.0), 2.0, 0.0);
        CHECK(eos.internal_energy(3.0, 0.0) == doctest::Approx(3.0));
    }
    SUBCASE("isobaric entropy: e = -P(S)/rho") {
        Eos eos = Eos::isobaric_entropy(ExprFn::poly({0.0, 1.0}));
        CHECK(eos.internal_energy(2.0, 4.0) == doctest::Approx(-2.0));
    }
    SUBCASE("barotropic P = rho: e = log(rho/rho0)") {
        Eos eos = Eos::barotropic(1.0, 1.0);
        CHECK(eos.internal_energy(1.0, 0.0) == doctest::Approx(0.0));
        CHECK(eos.internal_energy(2.5, 0.0) == doctest::Approx(std::log(2.5)));
        CHECK(eos.internal_energy_quadrature(2.5, 0.0) ==
              doctest::Approx(std::log(2.5)).epsilon(1e-10));
    }
}

TEST_CASE("de/drho = P/rho^2 and closed-form/quadrature agreement") {
    std::vector<Eos> variants;
    variants.push_back(Eos::polytropic(ExprFn::poly({1.0, 0.2}), 2.0, 0.1));
    variants.push_back(Eos::isobaric_entropy(ExprFn::poly({0.5, 1.0, 0.2})));
    variants.push_back(Eos::barotropic(0.7, 1.8, 0.1));
    variants.push_back(Eos::general_power(0.9, 1.4, ExprFn::sin(0.3, 1.0), 0.3, 2.2));

    Rng rng(1234, 0);
    for (const Eos& eos : variants) {
        for (int k = 0; k < 1000; ++k) {
            double rho = rng.uniform(0.5, 2.0);
            double S = rng.uniform(-1.0, 1.0);
            double h = 1e-5;
            double de = (eos.internal_energy(rho + h, S) - eos.internal_energy(rho - h, S)) /
                        (2 * h);
            double expected = eos.pressure(rho, S).P / (rho * rho);
            CHECK(std::abs(de - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
        }
        if (eos.has_closed_form_energy()) {
            // Quadrature pins e(rho0) = 0; compare differences across rho.
            for (int k = 0; k < 25; ++k) {
                double rho = rng.uniform(0.5, 2.0);
                double S = rng.uniform(-1.0, 1.0);
                double dq = eos.internal_energy_quadrature(rho, S);
                double dc = eos.internal_energy_closed(rho, S) -
                            eos.internal_energy_closed(1.0, S);
                CHECK(std::abs(dq - dc) <= 1e-8);
            }
        }
    }
}

TEST_CASE("internal energy dS partial") {
    Eos eos = Eos::general_power(1.0, 1.4, ExprFn::poly({1.0, 0.3}));
    double rho = 1.7, S = 0.2, h = 1e-5;
    double fd =
        (eos.internal_energy(rho, S + h) - eos.internal_energy(rho, S - h)) / (2 * h);
    CHECK(eos.internal_energy_dS(rho, S) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("classification predicates are mutually consistent") {
    // Polytropic with constant sigma and sigma0 = 0 is also barotropic.
    Eos eos = Eos::polytropic(ExprFn::constant(1.3), 2.0, 0.0);
    CHECK(eos.barotropic_predicate());
    CHECK_FALSE(eos.isobaric_predicate());

    Eos sdep = Eos::polytropic(ExprFn::poly({1.0, 0.5}), 2.0, 0.0);
    CHECK_FALSE(sdep.barotropic_predicate());
}

TEST_CASE("EOS construction guards") {
    CHECK_THROWS_AS(Eos::isobaric_entropy(ExprFn::constant(2.0)), ConfigError);
    CHECK_THROWS_AS(Eos::polytropic(ExprFn::constant(1.0), 1.0, 0.0), ConfigError);
    // Entirely trivial pressure law (P_rho = P_S = 0 everywhere).
    CHECK_THROWS_AS(Eos::barotropic(0.0, 2.0, 1.0), ConfigError);
}
