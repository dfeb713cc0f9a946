#pragma once

#include <limits>

#include "kolm/operators.hpp"

namespace kolm {

enum class NormKind { L2, Hs, Hdot_s, Gevrey };

/// Plancherel-exact norm. Hs uses weight (1+|k|^2)^s, Hdot_s uses |k|^{2s},
/// Gevrey uses exp(2*lambda*|k|) with |k|^2 = k^2/delta^2 + l^2. Gevrey
/// overflow is reported as +infinity.
inline double norm(const SpectralField& f, NormKind kind, double param = 0.0) {
    const DomainSpec& d = f.domain();
    double acc = 0.0;
    bool overflow = false;
    f.for_each([&](int k, int l, const Complex& c) {
        const double a2 = std::norm(c);
        if (a2 == 0.0) return;
        const double lam = d.lam(k, l);
        double w = 1.0;
        switch (kind) {
        case NormKind::L2: break;
        case NormKind::Hs: w = std::pow(1.0 + lam, param); break;
        case NormKind::Hdot_s: w = std::pow(lam, param); break;
        case NormKind::Gevrey: {
            const double e = 2.0 * param * std::sqrt(lam);
            if (e > 700.0) { overflow = true; return; }
            w = std::exp(e);
            break;
        }
        }
        acc += w * a2;
    });
    if (overflow || !std::isfinite(acc)) return std::numeric_limits<double>::infinity();
    return std::sqrt(d.area() * acc);
}

inline double norm_l2(const SpectralField& f) { return norm(f, NormKind::L2); }
inline double norm_h2(const SpectralField& f) { return norm(f, NormKind::Hs, 2.0); }

/// L2 pairing of two real fields, Plancherel-exact.
inline double inner_product(const SpectralField& f, const SpectralField& g) {
    if (!(f.domain() == g.domain())) throw ConfigError("inner_product: domain mismatch");
    double acc = 0.0;
    const auto& a = f.data();
    const auto& b = g.data();
    for (size_t i = 0; i < a.size(); ++i)
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return f.domain().area() * acc;
}

enum class Projector { P_K, P_D, P_helmholtz_kernel };

/// Orthogonal projections attached to ker L_K (P_K), its complement (P_D),
/// and ker(1+Delta).
inline SpectralField project_kernel(const SpectralField& f, Projector which) {
    detail::require_torus(f, "project_kernel");
    KernelSpec ks(f.domain());
    SpectralField g = f;
    g.for_each([&](int k, int l, Complex& c) {
        const bool keep = which == Projector::P_K ? ks.in_kernel_LK(k, l)
                        : which == Projector::P_D ? !ks.in_kernel_LK(k, l)
                                                  : ks.in_helmholtz_kernel(k, l);
        if (!keep) c = 0.0;
    });
    return g;
}

/// cos^p(y) cos(x) as a field, p in {2,4}; the test functions of the
/// compatibility pairings.
inline SpectralField cos_power_y_cos_x(const DomainSpec& d, int power) {
    // cos^2(y)cos(x) = (1/2 + cos(2y)/2) cos(x)
    // cos^4(y)cos(x) = (3/8 + cos(2y)/2 + cos(4y)/8) cos(x)
    SpectralField g = make_cos_cos(d, 1, 0, power == 2 ? 0.5 : 0.375);
    g += make_cos_cos(d, 1, 2, 0.5);
    if (power == 4) g += make_cos_cos(d, 1, 4, 0.125);
    return g;
}

/// Keep only the cos(kx)cos(ly) components; idempotent.
inline SpectralField symmetrize_even_even(const SpectralField& f) {
    detail::require_torus(f, "symmetrize_even_even");
    SpectralField g(f.domain());
    g.for_each([&](int k, int l, Complex& c) {
        if (std::abs(k) == f.nx() / 2 || std::abs(l) == f.ny() / 2) return;
        const double re = 0.25 * (f.get(k, l).real() + f.get(-k, l).real() +
                                  f.get(k, -l).real() + f.get(-k, -l).real());
        c = re;
    });
    return g;
}

/// Multiply by sin(y) / cos(y) through the exact one-mode band shift.
inline SpectralField mul_sin_y(const SpectralField& f) {
    detail::require_torus(f, "mul_sin_y");
    SpectralField g(f.domain());
    // sin(y) e^{ily} = (e^{i(l+1)y} - e^{i(l-1)y}) / (2i)
    f.for_each([&](int k, int l, const Complex& c) {
        const Complex half = c / Complex(0.0, 2.0);
        if (g.has_mode(k, l + 1)) g.at(k, l + 1) += half;
        if (g.has_mode(k, l - 1)) g.at(k, l - 1) -= half;
    });
    g.make_real();
    return g;
}

inline SpectralField mul_cos_y(const SpectralField& f) {
    detail::require_torus(f, "mul_cos_y");
    SpectralField g(f.domain());
    f.for_each([&](int k, int l, const Complex& c) {
        const Complex half = 0.5 * c;
        if (g.has_mode(k, l + 1)) g.at(k, l + 1) += half;
        if (g.has_mode(k, l - 1)) g.at(k, l - 1) += half;
    });
    g.make_real();
    return g;
}

} // namespace kolm
