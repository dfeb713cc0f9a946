#pragma once

#include "kolm/transform.hpp"

namespace kolm {

enum class Multiplier { laplacian, inv_laplacian, helmholtz_inverse };

namespace detail {

inline void require_torus(const SpectralField& f, const char* what) {
    if (f.domain().kind != DomainKind::torus)
        throw ConfigError(std::string(what) + " requires a torus field");
}

} // namespace detail

/// L2 norm of the Helmholtz-kernel component together with the projected field.
struct HelmholtzResult {
    SpectralField field;
    double compatibility_residual = 0.0;
};

/// Apply (1+Delta)^{-1} after projecting off ker(1+Delta); the L2 magnitude of
/// the discarded component is returned as a consistency diagnostic.
inline HelmholtzResult helmholtz_inverse(const SpectralField& f) {
    detail::require_torus(f, "helmholtz_inverse");
    const DomainSpec& d = f.domain();
    HelmholtzResult r{SpectralField(d), 0.0};
    double kernel_sq = 0.0;
    f.for_each([&](int k, int l, const Complex& c) {
        const double lam = d.lam(k, l);
        if (std::abs(lam - 1.0) < 1e-12) {
            kernel_sq += std::norm(c);
            return;
        }
        r.field.at(k, l) = c / (1.0 - lam);
    });
    r.compatibility_residual = std::sqrt(d.area() * kernel_sq);
    return r;
}

inline SpectralField apply_multiplier(const SpectralField& f, Multiplier op) {
    const DomainSpec& d = f.domain();
    SpectralField g(d);
    switch (op) {
    case Multiplier::laplacian:
        f.for_each([&](int k, int l, const Complex& c) { g.at(k, l) = -d.lam(k, l) * c; });
        return g;
    case Multiplier::inv_laplacian: {
        if (d.kind == DomainKind::torus) {
            double l2 = 0.0;
            for (const auto& c : f.data()) l2 += std::norm(c);
            l2 = std::sqrt(d.area() * l2);
            if (std::abs(f.mean()) > 1e-12 * std::max(l2, 1e-300))
                throw NumericalError("inv_laplacian requires a mean-free field");
        }
        f.for_each([&](int k, int l, const Complex& c) {
            const double lam = d.lam(k, l);
            g.at(k, l) = lam > 0.0 ? -c / lam : Complex(0, 0);
        });
        return g;
    }
    case Multiplier::helmholtz_inverse:
        return helmholtz_inverse(f).field;
    }
    return g;
}

/// Velocity (u1, u2) = (-d_y psi, d_x psi); exactly divergence-free.
inline std::pair<SpectralField, SpectralField> perp_gradient(const SpectralField& psi) {
    detail::require_torus(psi, "perp_gradient");
    const DomainSpec& d = psi.domain();
    SpectralField u1(d), u2(d);
    psi.for_each([&](int k, int l, const Complex& c) {
        u1.at(k, l) = Complex(0, -double(l)) * c;
        u2.at(k, l) = Complex(0, k / d.delta) * c;
    });
    return {u1, u2};
}

inline SpectralField dx(const SpectralField& f) {
    const DomainSpec& d = f.domain();
    SpectralField g(d);
    f.for_each([&](int k, int l, const Complex& c) {
        g.at(k, l) = Complex(0, d.kind == DomainKind::torus ? k / d.delta : double(k)) * c;
    });
    return g;
}

inline SpectralField dy(const SpectralField& f) {
    detail::require_torus(f, "dy");
    SpectralField g(f.domain());
    f.for_each([&](int k, int l, const Complex& c) { g.at(k, l) = Complex(0, double(l)) * c; });
    return g;
}

/// Zero every mode with |k| > nx/3 or |l| > ny/3 (2/3-rule truncation).
inline void dealias_23(SpectralField& f) {
    const int kc = f.nx() / 3, lc = f.ny() / 3;
    f.for_each([&](int k, int l, Complex& c) {
        if (std::abs(k) > kc || std::abs(l) > lc) c = 0.0;
    });
}

/// u . grad(omega) with u = perp_gradient(psi), evaluated pseudo-spectrally
/// with 2/3-rule dealiasing. The retained band of the result is alias-free.
inline SpectralField advect(const SpectralField& psi, const SpectralField& omega) {
    detail::require_torus(psi, "advect");
    if (!(psi.domain() == omega.domain())) throw ConfigError("advect: domain mismatch");
    const DomainSpec& d = psi.domain();
    SpectralField p = psi, w = omega;
    dealias_23(p);
    dealias_23(w);
    auto [u1, u2] = perp_gradient(p);
    SpectralField wx = dx(w), wy = dy(w);

    auto& eng = detail::FftEngine::instance();
    const int nx = d.nx, ny = d.ny;
    auto phys = [&](SpectralField& f) {
        eng.execute(nx, ny, FFTW_BACKWARD, f.data().data(), f.data().data());
    };
    phys(u1);
    phys(u2);
    phys(wx);
    phys(wy);
    SpectralField out(d);
    const double inv = 1.0 / (double(nx) * double(ny));
    for (size_t i = 0; i < out.data().size(); ++i) {
        const double v = u1.data()[i].real() * wx.data()[i].real() +
                         u2.data()[i].real() * wy.data()[i].real();
        out.data()[i] = v;
    }
    eng.execute(nx, ny, FFTW_FORWARD, out.data().data(), out.data().data());
    for (auto& c : out.data()) c *= inv;
    dealias_23(out);
    out.make_real();
    return out;
}

/// Evaluate a polynomial sum_m coeff[m] * f^m without aliasing by zero-padding
/// to pad_factor times the resolution (degree 5 needs pad_factor >= 3).
inline SpectralField polynomial_evaluate(const SpectralField& f,
                                         const std::vector<double>& coeff,
                                         int pad_factor = 3) {
    detail::require_torus(f, "polynomial_evaluate");
    const DomainSpec& d = f.domain();
    const int px = pad_factor * d.nx, py = pad_factor * d.ny;
    SpectralField big = pad_torus(f, px, py);
    auto& eng = detail::FftEngine::instance();
    eng.execute(px, py, FFTW_BACKWARD, big.data().data(), big.data().data());
    for (auto& c : big.data()) {
        const double s = c.real();
        double acc = 0.0;
        for (size_t m = coeff.size(); m-- > 0;) acc = acc * s + coeff[m];
        c = acc;
    }
    eng.execute(px, py, FFTW_FORWARD, big.data().data(), big.data().data());
    const double inv = 1.0 / (double(px) * double(py));
    for (auto& c : big.data()) c *= inv;
    SpectralField out = restrict_torus(big, d);
    out.make_real();
    return out;
}

/// Pointwise product of band-limited fields, exact on the retained band
/// (pad_factor must exceed (number of factors + 1)/2).
inline SpectralField product(const std::vector<const SpectralField*>& fs, int pad_factor) {
    if (fs.empty()) throw ConfigError("product: no factors");
    const DomainSpec& d = fs[0]->domain();
    const int px = pad_factor * d.nx, py = pad_factor * d.ny;
    auto& eng = detail::FftEngine::instance();
    std::vector<double> acc(size_t(px) * py, 1.0);
    for (const SpectralField* f : fs) {
        SpectralField big = pad_torus(*f, px, py);
        eng.execute(px, py, FFTW_BACKWARD, big.data().data(), big.data().data());
        for (size_t i = 0; i < acc.size(); ++i) acc[i] *= big.data()[i].real();
    }
    SpectralField big(DomainSpec::torus(d.delta, px, py));
    for (size_t i = 0; i < acc.size(); ++i) big.data()[i] = acc[i];
    eng.execute(px, py, FFTW_FORWARD, big.data().data(), big.data().data());
    const double inv = 1.0 / (double(px) * double(py));
    for (auto& c : big.data()) c *= inv;
    SpectralField out = restrict_torus(big, d);
    out.make_real();
    return out;
}

} // namespace kolm
