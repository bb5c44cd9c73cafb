#include "kinlab/eos.hpp"

#include <cmath>

namespace kinlab {

namespace {
constexpr double kRhoRef = 1.0;
}  // namespace

Eos Eos::polytropic(ExprFn sigma, double gamma, double sigma0) {
    if (std::abs(gamma - 1.0) < 1e-12)
        throw ConfigError("polytropic exponent gamma = 1 is not supported");
    Eos e;
    e.variant_ = EosVariant::Polytropic;
    e.sigma_ = std::move(sigma);
    e.gamma_ = gamma;
    e.sigma0_ = sigma0;
    e.validate_nontrivial();
    return e;
}

Eos Eos::isobaric_entropy(ExprFn kappa) {
    if (kappa.is_constant())
        throw ConfigError("isobaric-entropy EOS requires a non-constant kappa(S)");
    Eos e;
    e.variant_ = EosVariant::IsobaricEntropy;
    e.kappa_ = std::move(kappa);
    e.validate_nontrivial();
    return e;
}

Eos Eos::barotropic(double c0, double a, double c1) {
    Eos e;
    e.variant_ = EosVariant::Barotropic;
    e.c0_ = c0;
    e.a_ = a;
    e.c1_ = c1;
    e.validate_nontrivial();
    return e;
}

Eos Eos::general_power(double c0, double a, ExprFn w, double c1, double b) {
    Eos e;
    e.variant_ = EosVariant::General;
    e.c0_ = c0;
    e.a_ = a;
    e.w_ = std::move(w);
    e.c1_ = c1;
    e.b_ = b;
    e.validate_nontrivial();
    return e;
}

void Eos::validate_nontrivial() const {
    double max_prho = 0, max_ps = 0;
    for (double rho = 0.5; rho <= 2.01; rho += 0.25)
        for (double S = -1.0; S <= 1.01; S += 0.25) {
            PressureEval p = pressure(rho, S);
            max_prho = std::max(max_prho, std::abs(p.P_rho));
            max_ps = std::max(max_ps, std::abs(p.P_S));
        }
    if (max_prho < 1e-14 && max_ps < 1e-14)
        throw ConfigError("trivial EOS: P_rho and P_S both vanish on the state range");
}

PressureEval Eos::pressure(double rho, double S) const {
    if (rho <= 0)
        throw StateError("pressure evaluated at non-positive density rho = " +
                         format_double(rho));
    PressureEval r;
    switch (variant_) {
        case EosVariant::Polytropic: {
            double s = sigma_.value(S), s1 = sigma_.deriv(S), s2 = sigma_.deriv2(S);
            double rg = std::pow(rho, gamma_);
            r.P = s * rg + sigma0_;
            r.P_rho = s * gamma_ * rg / rho;
            r.P_rhorho = s * gamma_ * (gamma_ - 1.0) * rg / (rho * rho);
            r.P_S = s1 * rg;
            r.P_rhoS = s1 * gamma_ * rg / rho;
            r.P_SS = s2 * rg;
            break;
        }
        case EosVariant::IsobaricEntropy: {
            r.P = kappa_.value(S);
            r.P_S = kappa_.deriv(S);
            r.P_SS = kappa_.deriv2(S);
            break;
        }
        case EosVariant::Barotropic: {
            double ra = std::pow(rho, a_);
            r.P = c0_ * ra + c1_;
            r.P_rho = c0_ * a_ * ra / rho;
            r.P_rhorho = c0_ * a_ * (a_ - 1.0) * ra / (rho * rho);
            break;
        }
        case EosVariant::General: {
            double w = w_.value(S), w1 = w_.deriv(S), w2 = w_.deriv2(S);
            double ra = std::pow(rho, a_), rb = std::pow(rho, b_);
            r.P = c0_ * ra * w + c1_ * rb;
            r.P_rho = c0_ * a_ * ra / rho * w + c1_ * b_ * rb / rho;
            r.P_rhorho = c0_ * a_ * (a_ - 1.0) * ra / (rho * rho) * w +
                         c1_ * b_ * (b_ - 1.0) * rb / (rho * rho);
            r.P_S = c0_ * ra * w1;
            r.P_rhoS = c0_ * a_ * ra / rho * w1;
            r.P_SS = c0_ * ra * w2;
            break;
        }
    }
    return r;
}

bool Eos::has_closed_form_energy() const {
    switch (variant_) {
        case EosVariant::Polytropic:
        case EosVariant::IsobaricEntropy:
        case EosVariant::Barotropic:
            return true;
        case EosVariant::General:
            return std::abs(a_ - 1.0) > 1e-12 && std::abs(b_ - 1.0) > 1e-12;
    }
    return false;
}

double Eos::internal_energy_closed(double rho, double S) const {
    if (rho <= 0) throw StateError("internal energy at non-positive density");
    switch (variant_) {
        case EosVariant::Polytropic:
            return sigma_.value(S) * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0) -
                   sigma0_ / rho;
        case EosVariant::IsobaricEntropy:
            return -kappa_.value(S) / rho;
        case EosVariant::Barotropic: {
            double main = std::abs(a_ - 1.0) < 1e-12
                              ? c0_ * std::log(rho)
                              : c0_ * std::pow(rho, a_ - 1.0) / (a_ - 1.0);
            return main - c1_ / rho;
        }
        case EosVariant::General:
            return c0_ * w_.value(S) * std::pow(rho, a_ - 1.0) / (a_ - 1.0) +
                   c1_ * std::pow(rho, b_ - 1.0) / (b_ - 1.0);
    }
    return 0;
}

double Eos::internal_energy_quadrature(double rho, double S) const {
    if (rho <= 0) throw StateError("internal energy at non-positive density");
    auto f = [this, S](double r) { return pressure(r, S).P / (r * r); };
    return integrate_adaptive(f, kRhoRef, rho, 1e-13);
}

double Eos::internal_energy(double rho, double S) const {
    if (variant_ == EosVariant::General) return internal_energy_quadrature(rho, S);
    return internal_energy_closed(rho, S);
}

double Eos::internal_energy_dS(double rho, double S) const {
    switch (variant_) {
        case EosVariant::Polytropic:
            return sigma_.deriv(S) * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0);
        case EosVariant::IsobaricEntropy:
            return -kappa_.deriv(S) / rho;
        case EosVariant::Barotropic:
            return 0.0;
        case EosVariant::General: {
            auto f = [this, S](double r) { return pressure(r, S).P_S / (r * r); };
            return integrate_adaptive(f, kRhoRef, rho, 1e-13);
        }
    }
    return 0;
}

bool Eos::polytropic_special_exponent(int n) const {
    return variant_ == EosVariant::Polytropic &&
           std::abs(gamma_ - (1.0 + 2.0 / double(n))) <= 1e-12;
}

bool Eos::isobaric_predicate() const {
    for (double rho = 0.5; rho <= 2.01; rho += 0.25)
        for (double S = -1.0; S <= 1.01; S += 0.25)
            if (std::abs(pressure(rho, S).P_rho) > 1e-12) return false;
    return true;
}

bool Eos::barotropic_predicate() const {
    for (double rho = 0.5; rho <= 2.01; rho += 0.25)
        for (double S = -1.0; S <= 1.01; S += 0.25)
            if (std::abs(pressure(rho, S).P_S) > 1e-12) return false;
    return true;
}

std::string Eos::describe() const {
    switch (variant_) {
        case EosVariant::Polytropic:
            return format("polytropic(gamma=%g, sigma0=%g)", gamma_, sigma0_);
        case EosVariant::IsobaricEntropy:
            return "isobaric_entropy";
        case EosVariant::Barotropic:
            return format("barotropic(c0=%g, a=%g, c1=%g)", c0_, a_, c1_);
        case EosVariant::General:
            return format("general(c0=%g, a=%g, c1=%g, b=%g)", c0_, a_, c1_, b_);
    }
    return "?";
}

}  // namespace kinlab
