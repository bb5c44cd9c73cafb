#pragma once
/// @file registry.hpp
/// Declarative expression registry used by scenario configs: scalar entropy
/// functions f(S), sigma(S), kappa(S) and initial-condition fields over the
/// chart. Deliberately small (polynomial / exp / sin and Fourier modes plus
/// Gaussian bumps) so configs stay auditable.

#include "kinlab/util.hpp"

#include <string>
#include <vector>

namespace kinlab {

// Scalar function of one variable with two derivatives.
class ExprFn {
  public:
    enum class Kind { Poly, Exp, Sin };

    ExprFn() : kind_(Kind::Poly), coeffs_{0.0} {}

    static ExprFn constant(double c) { return poly({c}); }
    static ExprFn poly(std::vector<double> coeffs) {
        ExprFn f;
        f.kind_ = Kind::Poly;
        f.coeffs_ = std::move(coeffs);
        if (f.coeffs_.empty()) f.coeffs_.push_back(0.0);
        return f;
    }
    // c0 * exp(c1 * s)
    static ExprFn exp(double c0, double c1) {
        ExprFn f;
        f.kind_ = Kind::Exp;
        f.coeffs_ = {c0, c1};
        return f;
    }
    // amp * sin(freq * s + phase)
    static ExprFn sin(double amp, double freq, double phase = 0.0) {
        ExprFn f;
        f.kind_ = Kind::Sin;
        f.coeffs_ = {amp, freq, phase};
        return f;
    }

    double value(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;

    bool is_constant() const;
    Kind kind() const { return kind_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

  private:
    Kind kind_;
    std::vector<double> coeffs_;
};

// Field over chart coordinates: constant + Fourier modes + Gaussian bumps.
// All built-in charts have 2*pi extent per axis, so integer wave vectors
// give periodic fields.
struct FourierMode {
    double amp = 0;
    Vec k;           // wave vector (chart coordinates)
    double phase = 0;
    bool cosine = false;  // sin by default
};

struct GaussianBump {
    double amp = 0;
    Vec center;
    double width = 1.0;
    bool wrap = false;  // min-image displacement on periodic axes
    Vec extent;         // per-axis domain extent, used when wrap is set
};

class FieldExpr {
  public:
    FieldExpr() = default;
    explicit FieldExpr(double c) : const_(c) {}

    FieldExpr& set_const(double c) {
        const_ = c;
        return *this;
    }
    FieldExpr& add_mode(FourierMode m) {
        modes_.push_back(m);
        return *this;
    }
    FieldExpr& add_bump(GaussianBump b) {
        bumps_.push_back(b);
        return *this;
    }

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;

    double constant_part() const { return const_; }
    bool is_constant() const { return modes_.empty() && bumps_.empty(); }

  private:
    double const_ = 0;
    std::vector<FourierMode> modes_;
    std::vector<GaussianBump> bumps_;
};

}  // namespace kinlab
