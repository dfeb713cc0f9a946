#pragma once

#include <random>

#include "kolm/analysis.hpp"

namespace kolm {

/// Random real torus field with spectral decay exp(-decay*|k|), band-limited
/// to |k|,|l| <= band (default: the 2/3 ball). Mean-free unless keep_mean.
inline SpectralField random_field(const DomainSpec& d, std::mt19937_64& rng,
                                  double decay = 0.3, int band = 0,
                                  bool keep_mean = false) {
    if (band <= 0) band = std::min(d.nx, d.ny) / 3;
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(d);
    f.for_each([&](int k, int l, Complex& c) {
        if (std::abs(k) > band || std::abs(l) > band) return;
        const double w = std::exp(-decay * std::sqrt(d.lam(k, l)));
        c = Complex(gauss(rng), gauss(rng)) * w;
    });
    f.make_real();
    if (!keep_mean) f.at(0, 0) = 0.0;
    return f;
}

/// Random member of the constructor's admissible set X: even-even, mean-free,
/// orthogonal to cos(x) and cos(y), small pairings against cos^2(y)cos(x) and
/// cos^4(y)cos(x), and H2 norm scaled to h2_target.
inline SpectralField random_X_field(const DomainSpec& d, std::mt19937_64& rng,
                                    double h2_target = 5.0) {
    SpectralField f = symmetrize_even_even(random_field(d, rng, 0.5));
    f.at(0, 0) = 0.0;
    f.for_each([&](int k, int l, Complex& c) {
        if (std::abs(d.lam(k, l) - 1.0) < 1e-12) c = 0.0;
    });
    const double h2 = norm_h2(f);
    if (h2 > 0.0) f *= h2_target / h2;
    SpectralField cc2 = cos_power_y_cos_x(d, 2);
    SpectralField cc4 = cos_power_y_cos_x(d, 4);
    // damp the carrier modes (1,2) and (1,4) until the pairings sit inside
    // the admissible budget 1/100
    for (int tries = 0; tries < 12; ++tries) {
        const double p2 = inner_product(f, cc2), p4 = inner_product(f, cc4);
        if (std::abs(p2) + std::abs(p4) < 0.009) break;
        for (int l : {2, 4}) {
            f.at(1, l) *= 0.5;
            f.at(-1, l) *= 0.5;
            f.at(1, -l) *= 0.5;
            f.at(-1, -l) *= 0.5;
        }
    }
    return f;
}

} // namespace kolm
