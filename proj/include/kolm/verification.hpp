#pragma once

#include "kolm/stationary.hpp"

namespace kolm {

/// L2 and Linf norms of u . grad(Delta Psi): both vanish for stationary
/// states of the Euler equations.
struct StationarityResidual {
    double l2 = 0.0;
    double linf = 0.0;
    double l2_relative = 0.0; // l2 normalized by || grad(Delta Psi) ||
};

inline StationarityResidual stationarity_residual(const SpectralField& Psi) {
    detail::require_torus(Psi, "stationarity_residual");
    SpectralField omega = apply_multiplier(Psi, Multiplier::laplacian);
    SpectralField adv = advect(Psi, omega);
    StationarityResidual r;
    r.l2 = norm_l2(adv);
    PhysicalField v = to_physical(adv);
    for (double x : v) r.linf = std::max(r.linf, std::abs(x));
    const double grad = norm(omega, NormKind::Hdot_s, 0.5);
    r.l2_relative = grad > 0.0 ? r.l2 / grad : r.l2;
    return r;
}

/// || Delta Psi - F(Psi) ||_L2 for a degree-5 polynomial F (with linear part).
inline double equation_residual(const SpectralField& Psi, const std::array<double, 6>& F) {
    SpectralField lap = apply_multiplier(Psi, Multiplier::laplacian);
    SpectralField rhs = polynomial_evaluate(Psi, std::vector<double>(F.begin(), F.end()));
    return norm_l2(lap - rhs);
}

/// The pairing <Psi, cos x cos 4y> certifying departure from ker L_K.
inline double catseye_projection(const SpectralField& Psi) {
    if (!Psi.domain().is_square())
        throw ConfigError("catseye_projection requires the square torus");
    return inner_product(Psi, make_cos_cos(Psi.domain(), 1, 4));
}

struct GevreyFit {
    double lambda = 0.0;
    double fit_residual = 0.0; // rms misfit of the linear log-amplitude fit
    int modes_used = 0;
};

/// Least-squares decay rate of log|amplitude| against |k| over the y-only
/// modes plus the (1,l) family, above an amplitude floor. lambda = -slope.
inline GevreyFit gevrey_radius_fit(const SpectralField& field, double floor = 1e-13) {
    detail::require_torus(field, "gevrey_radius_fit");
    const DomainSpec& d = field.domain();
    std::vector<double> xs, ys;
    auto push = [&](int k, int l) {
        const double amp = std::abs(cos_cos_amplitude(field, k, l));
        if (amp <= floor) return;
        xs.push_back(std::sqrt(d.lam(k, l)));
        ys.push_back(std::log(amp));
    };
    for (int l = 1; l < d.ny / 2; ++l) push(0, l);
    for (int l = 0; l < d.ny / 2; ++l) push(1, l);
    GevreyFit g;
    g.modes_used = int(xs.size());
    if (g.modes_used < 4)
        throw NumericalError("gevrey_radius_fit: fewer than 4 usable modes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = double(xs.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw NumericalError("gevrey_radius_fit: degenerate fit");
    const double slope = (n * sxy - sx * sy) / denom;
    const double icpt = (sy - slope * sx) / n;
    g.lambda = -slope;
    double rss = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (icpt + slope * xs[i]);
        rss += e * e;
    }
    g.fit_residual = std::sqrt(rss / n);
    return g;
}

struct ObstructionBracket {
    SpectralField field;        // u . grad(omega) for omega = a(sin(ly) + cos x)
    double resonant_coeff = 0;  // coefficient of sin(x) cos(l y)
};

/// Self-interaction of the neutral direction a(sin(ly) + cos x): the
/// transported vorticity picks up the resonant mode (l - 1/l) a^2 sin x cos(ly)
/// ((3/2) a^2 for l = 2), which obstructs stationarity in that direction.
inline ObstructionBracket obstruction_bracket(const DomainSpec& d, double a, int ell) {
    if (!d.is_square()) throw ConfigError("obstruction_bracket requires the square torus");
    if (ell < 2) throw ConfigError("obstruction_bracket requires ell >= 2");
    SpectralField omega = make_cos_sin(d, 0, ell, a) + make_cos_cos(d, 1, 0, a);
    ObstructionBracket r{SpectralField(d), 0.0};
    if (a == 0.0) return r;
    SpectralField psi = apply_multiplier(omega, Multiplier::inv_laplacian);
    r.field = advect(psi, omega);
    r.resonant_coeff = sin_cos_amplitude(r.field, 1, ell);
    return r;
}

} // namespace kolm
