#include "kinlab/registry.hpp"

#include <cmath>

namespace kinlab {

double ExprFn::value(double s) const {
    switch (kind_) {
        case Kind::Poly: {
            double r = 0;
            for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * s + coeffs_[i];
            return r;
        }
        case Kind::Exp:
            return coeffs_[0] * std::exp(coeffs_[1] * s);
        case Kind::Sin:
            return coeffs_[0] * std::sin(coeffs_[1] * s + coeffs_[2]);
    }
    return 0;
}

double ExprFn::deriv(double s) const {
    switch (kind_) {
        case Kind::Poly: {
            double r = 0;
            for (std::size_t i = coeffs_.size(); i-- > 1;) r = r * s + double(i) * coeffs_[i];
            return r;
        }
        case Kind::Exp:
            return coeffs_[0] * coeffs_[1] * std::exp(coeffs_[1] * s);
        case Kind::Sin:
            return coeffs_[0] * coeffs_[1] * std::cos(coeffs_[1] * s + coeffs_[2]);
    }
    return 0;
}

double ExprFn::deriv2(double s) const {
    switch (kind_) {
        case Kind::Poly: {
            double r = 0;
            for (std::size_t i = coeffs_.size(); i-- > 2;)
                r = r * s + double(i) * double(i - 1) * coeffs_[i];
            return r;
        }
        case Kind::Exp:
            return coeffs_[0] * coeffs_[1] * coeffs_[1] * std::exp(coeffs_[1] * s);
        case Kind::Sin:
            return -coeffs_[0] * coeffs_[1] * coeffs_[1] *
                   std::sin(coeffs_[1] * s + coeffs_[2]);
    }
    return 0;
}

bool ExprFn::is_constant() const {
    switch (kind_) {
        case Kind::Poly:
            for (std::size_t i = 1; i < coeffs_.size(); ++i)
                if (coeffs_[i] != 0.0) return false;
            return true;
        case Kind::Exp:
            return coeffs_[0] == 0.0 || coeffs_[1] == 0.0;
        case Kind::Sin:
            return coeffs_[0] == 0.0 || coeffs_[1] == 0.0;
    }
    return true;
}

namespace {

double bump_displacement2(const GaussianBump& b, const Vec& x, Vec& d) {
    d = Vec(x.n);
    double r2 = 0;
    for (int i = 0; i < x.n; ++i) {
        double di = x[i] - b.center[i];
        if (b.wrap && b.extent.n == x.n && b.extent[i] > 0) {
            double L = b.extent[i];
            di -= L * std::round(di / L);
        }
        d[i] = di;
        r2 += di * di;
    }
    return r2;
}

}  // namespace

double FieldExpr::value(const Vec& x) const {
    double r = const_;
    for (const auto& m : modes_) {
        double arg = dot(m.k, x) + m.phase;
        r += m.amp * (m.cosine ? std::cos(arg) : std::sin(arg));
    }
    for (const auto& b : bumps_) {
        Vec d;
        double r2 = bump_displacement2(b, x, d);
        r += b.amp * std::exp(-r2 / (2.0 * b.width * b.width));
    }
    return r;
}

Vec FieldExpr::gradient(const Vec& x) const {
    Vec g(x.n);
    for (const auto& m : modes_) {
        double arg = dot(m.k, x) + m.phase;
        double d = m.amp * (m.cosine ? -std::sin(arg) : std::cos(arg));
        for (int i = 0; i < x.n; ++i) g[i] += d * m.k[i];
    }
    for (const auto& b : bumps_) {
        Vec d;
        double r2 = bump_displacement2(b, x, d);
        double val = b.amp * std::exp(-r2 / (2.0 * b.width * b.width));
        for (int i = 0; i < x.n; ++i) g[i] += val * (-d[i] / (b.width * b.width));
    }
    return g;
}

}  // namespace kinlab
