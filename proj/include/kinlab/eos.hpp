#pragma once
/// @file eos.hpp
/// Equation-of-state algebra. Four variants:
///   General          P = c0 rho^a w(S) + c1 rho^b
///   Polytropic       P = sigma(S) rho^gamma + sigma0   (sigma0 constant)
///   IsobaricEntropy  P = kappa(S), kappa non-constant
///   Barotropic       P = c0 rho^a + c1
/// The internal energy is e = integral of rho^-2 P at fixed S; closed forms
/// where the variant provides one, adaptive quadrature from rho0 = 1 for the
/// General variant.

#include "kinlab/registry.hpp"
#include "kinlab/util.hpp"

namespace kinlab {

enum class EosVariant { General, Polytropic, IsobaricEntropy, Barotropic };

struct PressureEval {
    double P = 0;
    double P_rho = 0, P_S = 0;
    double P_rhorho = 0, P_rhoS = 0, P_SS = 0;
};

class Eos {
  public:
    static Eos polytropic(ExprFn sigma, double gamma, double sigma0 = 0.0);
    static Eos isobaric_entropy(ExprFn kappa);
    static Eos barotropic(double c0, double a, double c1 = 0.0);
    static Eos general_power(double c0, double a, ExprFn w, double c1 = 0.0, double b = 2.0);

    EosVariant variant() const { return variant_; }
    double gamma() const { return gamma_; }
    double sigma0() const { return sigma0_; }

    PressureEval pressure(double rho, double S) const;  // StateError if rho <= 0
    double internal_energy(double rho, double S) const;
    double internal_energy_dS(double rho, double S) const;
    // Closed-form energy where available (all variants except General use it
    // as the default path); used to cross-check the quadrature path.
    bool has_closed_form_energy() const;
    double internal_energy_closed(double rho, double S) const;
    double internal_energy_quadrature(double rho, double S) const;

    // Classification predicates, evaluated semantically on the sampled state
    // range rho in [0.5, 2], S in [-1, 1].
    bool polytropic_special_exponent(int n) const;
    bool isobaric_predicate() const;    // P_rho == 0 on the sample range
    bool barotropic_predicate() const;  // P_S == 0 on the sample range

    std::string describe() const;

  private:
    Eos() = default;
    void validate_nontrivial() const;

    EosVariant variant_ = EosVariant::Barotropic;
    ExprFn sigma_, kappa_, w_;
    double gamma_ = 2.0, sigma0_ = 0.0;
    double c0_ = 1.0, a_ = 2.0, c1_ = 0.0, b_ = 2.0;
};

}  // namespace kinlab
