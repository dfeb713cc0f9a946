#pragma once

#include "kolm/channel.hpp"
#include "kolm/stationary.hpp"

namespace kolm {

struct CoercivityConstant {
    double c_delta = 0.0;
    int k = 0, l = 0;          // attaining mode
    double tail_bound = 0.0;   // lower bound for modes outside the scan
    bool kernel_collision = false;
};

/// c_delta = min over non-shear modes of |1 - 1/(k^2/delta^2 + l^2)|, the
/// multiplier bound behind rigidity on rectangular tori. Integer delta makes
/// the multiplier vanish on (delta, 0); reported as c_delta = 0.
inline CoercivityConstant coercivity_constant(double delta, int kmax) {
    if (delta <= 0.0) throw ConfigError("coercivity_constant: delta must be positive");
    if (kmax < 16) throw ConfigError("coercivity_constant: kmax must be >= 16");
    CoercivityConstant r;
    r.c_delta = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kmax; ++k)
        for (int l = -kmax; l <= kmax; ++l) {
            const double lam = double(k) * double(k) / (delta * delta) + double(l) * double(l);
            const double m = std::abs(1.0 - 1.0 / lam);
            if (m < r.c_delta) {
                r.c_delta = m;
                r.k = k;
                r.l = l;
            }
        }
    r.tail_bound = 1.0 - std::max(delta * delta, 1.0) / (double(kmax) * double(kmax));
    if (r.tail_bound < r.c_delta) r.c_delta = r.tail_bound; // never binds for kmax >= 16
    if (r.c_delta < 1e-12) {
        r.c_delta = 0.0;
        r.kernel_collision = true;
    }
    return r;
}

struct SinIdentity {
    double lhs = 0.0; // integral of d_y(sin(y) f) cos(y) f
    double rhs = 0.0; // ||f||_L2^2 / 2
};

/// The pointwise identity behind the rigidity estimate: integrating
/// d_y(sin y f) cos y f over the torus gives half the L2 mass of f.
inline SinIdentity sin_identity_check(const SpectralField& f) {
    detail::require_torus(f, "sin_identity_check");
    SpectralField fy = dy(f);
    detail::PaddedSamples sf = detail::to_padded_physical(f, 2);
    detail::PaddedSamples sfy = detail::to_padded_physical(fy, 2);
    double acc = 0.0;
    for (int i = 0; i < sf.px; ++i)
        for (int j = 0; j < sf.py; ++j) {
            const double y = 2.0 * pi * j / sf.py;
            const double v = sf.values[size_t(i) * sf.py + j];
            const double w = sfy.values[size_t(i) * sf.py + j];
            acc += (std::cos(y) * v + std::sin(y) * w) * std::cos(y) * v;
        }
    SinIdentity r;
    r.lhs = acc * f.domain().area() / double(sf.values.size());
    const double n = norm_l2(f);
    r.rhs = 0.5 * n * n;
    return r;
}

/// Shear profile near Poiseuille, supplied analytically with derivatives up
/// to fifth order. Closeness is the grid maximum of |V'-2y|, |V''-2|, |V'''|,
/// |V''''|, |V'''''|.
struct ShearProfile {
    std::function<double(double)> V, V1, V2, V3, V4, V5;

    static ShearProfile poiseuille(double c = 0.0) {
        return {[c](double y) { return y * y - c; },
                [](double y) { return 2.0 * y; },
                [](double) { return 2.0; },
                [](double) { return 0.0; },
                [](double) { return 0.0; },
                [](double) { return 0.0; }};
    }

    /// Poiseuille plus the analytic perturbation amp*sin(w y).
    static ShearProfile perturbed(double amp, double w) {
        auto base = poiseuille();
        return {[=](double y) { return y * y + amp * std::sin(w * y); },
                [=](double y) { return 2.0 * y + amp * w * std::cos(w * y); },
                [=](double y) { return 2.0 - amp * w * w * std::sin(w * y); },
                [=](double y) { return -amp * w * w * w * std::cos(w * y); },
                [=](double y) { return amp * std::pow(w, 4) * std::sin(w * y); },
                [=](double y) { return amp * std::pow(w, 5) * std::cos(w * y); }};
    }

    double closeness(int ngrid = 2001) const {
        double m = 0.0;
        for (int i = 0; i < ngrid; ++i) {
            const double y = -1.0 + 2.0 * i / double(ngrid - 1);
            m = std::max({m, std::abs(V1(y) - 2.0 * y), std::abs(V2(y) - 2.0),
                          std::abs(V3(y)), std::abs(V4(y)), std::abs(V5(y))});
        }
        return m;
    }

    bool admissible(double eps1 = 0.5, int ngrid = 2001) const {
        if (closeness(ngrid) >= eps1) return false;
        for (int i = 0; i < ngrid; ++i) {
            const double y = -1.0 + 2.0 * i / double(ngrid - 1);
            if (V2(y) < 1.0) return false;
        }
        return true;
    }
};

/// Everything measured for one coercivity sample of the quadratic form
///   A_V(w) = <V' d_x L_V w, d_y w> + <V' d_y L_V w, d_x w>,
///   L_V w  = V d_x w - V'' d_x psi,  Delta psi = w.
struct CoercivityReport {
    double A_V = 0.0;
    double lower_rhs = 0.0;      // (1/16)(||V' d_x w||^2 + ||d_x grad psi||^2)
    double upper_pairing = 0.0;  // ||L_V w||_{H1dot} ||w||_{H1dot}
    double dxx_psi_sq = 0.0;     // ||d_xx psi||^2
    double dxy_psi_sq = 0.0;     // ||d_xy psi||^2
    double vp_dx_w_sq = 0.0;     // ||V' d_x w||^2
    bool lower_ok = false;
    bool intermediate_ok = false; // ||d_xx psi||^2 <= 4||d_xy psi||^2 + ||V' d_x w||^2
};

inline CoercivityReport A_V(const SpectralField& omega, const ShearProfile& V,
                            int quad_points = 0) {
    const DomainSpec& d = omega.domain();
    if (d.kind != DomainKind::channel) throw ConfigError("A_V requires a channel field");
    if (!V.admissible()) throw ConfigError("A_V: inadmissible shear profile");
    SpectralField psi = channel_poisson_solve(omega);
    if (quad_points <= 0) quad_points = 2 * d.ny + 40;
    const Quadrature q = Quadrature::gauss_legendre(quad_points);

    std::vector<double> Vv(q.x.size()), V1v(q.x.size()), V2v(q.x.size()), V3v(q.x.size());
    for (size_t g = 0; g < q.x.size(); ++g) {
        Vv[g] = V.V(q.x[g]);
        V1v[g] = V.V1(q.x[g]);
        V2v[g] = V.V2(q.x[g]);
        V3v[g] = V.V3(q.x[g]);
    }

    CoercivityReport r;
    double lw_h1_sq = 0.0, w_h1_sq = 0.0;
    for (int ix = 0; ix < d.nx; ++ix) {
        const int k = ix <= d.nx / 2 ? ix : ix - d.nx;
        if (k == 0) continue;
        const double k2 = double(k) * double(k);
        BandProfiles bw = eval_band(omega, ix, q);
        BandProfiles bp = eval_band(psi, ix, q);
        bool active = false;
        for (const auto& c : bw.v)
            if (std::abs(c) > 0.0) active = true;
        if (!active) continue;
        for (size_t g = 0; g < q.x.size(); ++g) {
            const double wq = q.w[g];
            const Complex w = bw.v[g], wy = bw.vy[g];
            const Complex p = bp.v[g], py = bp.vy[g];
            const Complex lw = Vv[g] * w - V2v[g] * p;            // L_V w = i k * lw
            const Complex lwy = V1v[g] * w + Vv[g] * wy - V3v[g] * p - V2v[g] * py;
            // term1 = V' d_x(L_V w) conj(d_y w), term2 = V' d_y(L_V w) conj(d_x w)
            const double term1 = -k2 * V1v[g] * (lw * std::conj(wy)).real();
            const double term2 = k2 * V1v[g] * (lwy * std::conj(w)).real();
            r.A_V += 2.0 * pi * wq * (term1 + term2);
            r.vp_dx_w_sq += 2.0 * pi * wq * k2 * V1v[g] * V1v[g] * std::norm(w);
            r.dxx_psi_sq += 2.0 * pi * wq * k2 * k2 * std::norm(p);
            r.dxy_psi_sq += 2.0 * pi * wq * k2 * std::norm(py);
            lw_h1_sq += 2.0 * pi * wq * (k2 * k2 * std::norm(lw) + k2 * std::norm(lwy));
            w_h1_sq += 2.0 * pi * wq * (k2 * std::norm(w) + std::norm(wy));
        }
    }
    r.lower_rhs = (r.vp_dx_w_sq + r.dxx_psi_sq + r.dxy_psi_sq) / 16.0;
    r.upper_pairing = std::sqrt(lw_h1_sq) * std::sqrt(w_h1_sq);
    r.lower_ok = r.A_V >= r.lower_rhs * (1.0 - 1e-12) - 1e-300;
    r.intermediate_ok = r.dxx_psi_sq <= 4.0 * r.dxy_psi_sq + r.vp_dx_w_sq + 1e-12;
    return r;
}

struct CoercivitySample {
    int index = 0;
    CoercivityReport report;
    double ratio_c1 = 0.0; // (||d_x grad psi||^2 + ||V' d_x w||^2) / pairing^{-1}...
};

struct CoercivityCampaign {
    int samples = 0;
    int lower_violations = 0;
    int intermediate_violations = 0;
    double empirical_c1 = std::numeric_limits<double>::infinity();
    double max_upper_constant = 0.0; // max A_V / pairing
    std::vector<CoercivitySample> records;
};

/// Sampling campaign over random admissible (omega, V): verifies the chain
/// lower_rhs <= A_V <= C * pairing and reports the implied empirical
/// coercivity constant min pairing/(||d_x grad psi||^2 + ||V' d_x w||^2).
inline CoercivityCampaign coercivity_test(int samples, double epsilon, uint64_t seed,
                                          int nx = 32, int ny = 32) {
    if (samples < 10) throw ConfigError("coercivity_test: need at least 10 samples");
    const DomainSpec d = DomainSpec::channel(nx, ny);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.5, 3.5);
    CoercivityCampaign camp;
    camp.samples = samples;
    for (int s = 0; s < samples; ++s) {
        SpectralField omega = random_channel_field(d, rng, std::min(6, nx / 3),
                                                   std::min(12, ny / 2));
        ShearProfile V = ShearProfile::poiseuille();
        if (epsilon > 0.0) {
            const double w = uni(rng);
            const double amp = 0.9 * epsilon / std::max(w, std::pow(w, 5));
            V = ShearProfile::perturbed(amp, w);
        }
        CoercivityReport rep = A_V(omega, V);
        CoercivitySample rec;
        rec.index = s;
        rec.report = rep;
        const double sum = rep.dxx_psi_sq + rep.dxy_psi_sq + rep.vp_dx_w_sq;
        rec.ratio_c1 = rep.upper_pairing > 0.0 ? rep.upper_pairing / sum : 0.0;
        camp.records.push_back(rec);
        if (!rep.lower_ok) ++camp.lower_violations;
        if (!rep.intermediate_ok) ++camp.intermediate_violations;
        if (rep.upper_pairing > 0.0) {
            camp.empirical_c1 = std::min(camp.empirical_c1, rec.ratio_c1);
            camp.max_upper_constant = std::max(camp.max_upper_constant, rep.A_V / rep.upper_pairing);
        }
    }
    return camp;
}

} // namespace kolm
