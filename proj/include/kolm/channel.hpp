#pragma once

#include <random>

#include "kolm/analysis.hpp"

namespace kolm {

/// Gauss-Legendre nodes and weights on [-1,1]; machine-accurate quadrature
/// for the analytic integrands of the channel pairings.
struct Quadrature {
    std::vector<double> x, w;

    static Quadrature gauss_legendre(int n) {
        Quadrature q;
        q.x.resize(n);
        q.w.resize(n);
        for (int i = 0; i < n; ++i) {
            // Newton iteration from the Chebyshev-like initial guess
            double t = std::cos(pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) {
                    q.x[i] = t;
                    q.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
                    break;
                }
            }
        }
        return q;
    }
};

/// y-profiles of one x-band of a channel field at the quadrature nodes.
struct BandProfiles {
    std::vector<Complex> v;  // values
    std::vector<Complex> vy; // d/dy values
};

inline BandProfiles eval_band(const SpectralField& f, int slot_ix, const Quadrature& q) {
    const int ny = f.ny();
    BandProfiles b;
    b.v.assign(q.x.size(), Complex(0, 0));
    b.vy.assign(q.x.size(), Complex(0, 0));
    for (int l = 1; l <= ny; ++l) {
        const Complex c = f.data()[size_t(slot_ix) * ny + (l - 1)];
        if (std::abs(c) == 0.0) continue;
        const double fl = 0.5 * pi * l;
        for (size_t g = 0; g < q.x.size(); ++g) {
            const double arg = fl * (q.x[g] + 1.0);
            b.v[g] += c * std::sin(arg);
            b.vy[g] += c * fl * std::cos(arg);
        }
    }
    return b;
}

/// Dirichlet Poisson solve Delta psi = omega on the channel, diagonal in the
/// Fourier-sine basis. Rejects x-averaged content (k = 0 must be empty).
inline SpectralField channel_poisson_solve(const SpectralField& omega) {
    const DomainSpec& d = omega.domain();
    if (d.kind != DomainKind::channel)
        throw ConfigError("channel_poisson_solve requires a channel field");
    for (int l = 1; l <= d.ny; ++l)
        if (std::abs(omega.get(0, l)) > 1e-13)
            throw ConfigError("channel_poisson_solve: field must be mean-free in x");
    SpectralField psi(d);
    psi.for_each([&](int k, int l, Complex& c) {
        if (k == 0) return;
        c = -omega.get(k, l) / d.lam(k, l);
    });
    return psi;
}

/// Random admissible channel vorticity: truncated sine-Fourier series with
/// spectral decay exp(-|k|/4), mean-free in x.
inline SpectralField random_channel_field(const DomainSpec& d, std::mt19937_64& rng,
                                          int kband, int lband) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(d);
    for (int k = 1; k <= kband; ++k)
        for (int l = 1; l <= lband; ++l) {
            const double amp = std::exp(-std::sqrt(d.lam(k, l)) / 4.0);
            const Complex c(gauss(rng) * amp, gauss(rng) * amp);
            f.at(k, l) = c;
            f.at(-k, l) = std::conj(c);
        }
    return f;
}

} // namespace kolm
