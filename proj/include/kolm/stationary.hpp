#pragma once

#include <array>
#include <optional>

#include "kolm/analysis.hpp"

namespace kolm {

/// Odd quintic nonlinearity f(A,B;s) = A s + B s^3 + s^5/5. The full
/// right-hand side of the stationary problem is F_eps(s) = -s + eps*f(A,B;s).
struct QuinticNonlinearity {
    double A = 0.0;
    double B = 0.0;
    double c5 = 0.2;

    std::vector<double> poly() const { return {0.0, A, 0.0, B, 0.0, c5}; }

    /// Degree-5 coefficients of F_eps(s) = -s + eps f(A,B;s).
    std::array<double, 6> full_poly(double eps) const {
        return {0.0, -1.0 + eps * A, 0.0, eps * B, 0.0, eps * c5};
    }
};

/// Membership data for the admissible set X of the contraction:
/// even-even symmetry, orthogonality to cos(x), cos(y), bounded H2 norm and
/// small compatibility pairings.
struct XCertificate {
    double h2_norm = 0.0;
    double ip_cc2 = 0.0; // <psi, cos^2(y)cos(x)>
    double ip_cc4 = 0.0; // <psi, cos^4(y)cos(x)>
    double symmetry_defect = 0.0;
    double kernel_orthogonality_defect = 0.0;

    bool passes() const {
        return h2_norm <= 10.0 && std::abs(ip_cc2) + std::abs(ip_cc4) <= 0.01 &&
               symmetry_defect <= 1e-10 && kernel_orthogonality_defect <= 1e-10;
    }
    /// Hard bounds are 2x the membership bounds; beyond them the run aborts.
    bool hard_violation() const {
        return h2_norm > 20.0 || std::abs(ip_cc2) + std::abs(ip_cc4) > 0.02;
    }
};

inline XCertificate make_certificate(const SpectralField& psi) {
    XCertificate c;
    c.h2_norm = norm_h2(psi);
    c.ip_cc2 = inner_product(psi, cos_power_y_cos_x(psi.domain(), 2));
    c.ip_cc4 = inner_product(psi, cos_power_y_cos_x(psi.domain(), 4));
    c.symmetry_defect = norm_l2(psi - symmetrize_even_even(psi));
    c.kernel_orthogonality_defect = norm_l2(project_kernel(psi, Projector::P_helmholtz_kernel));
    return c;
}

struct IterateRecord {
    int iteration = 0;
    double h2_diff = 0.0;
    double compat_residual = 0.0;
    XCertificate certificate;
};

struct FixedPointReport {
    double epsilon = 0.0;
    std::vector<IterateRecord> iterates;
    std::vector<double> contraction_estimates;
    double A = 0.0, B = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;

    double max_contraction() const {
        double m = 0.0;
        for (double c : contraction_estimates) m = std::max(m, c);
        return m;
    }
};

struct SeriesCoefficients {
    std::vector<double> a;
    std::vector<double> b;

    /// Smallest M with |b_j| <= M^j for j >= 1; the series converges for
    /// eps < 1/M.
    double growth_constant() const {
        double m = 0.0;
        for (size_t j = 1; j < b.size(); ++j)
            m = std::max(m, std::pow(std::abs(b[j]), 1.0 / double(j)));
        return m;
    }
};

namespace detail {

inline SpectralField cos_pow_y(const DomainSpec& d, int p) {
    // cos^3 y = (3 cos y + cos 3y)/4 ; cos^5 y = (10 cos y + 5 cos 3y + cos 5y)/16
    // cos^2 y = (1 + cos 2y)/2
    switch (p) {
    case 1: return make_cos_cos(d, 0, 1);
    case 2: {
        SpectralField f = make_cos_cos(d, 0, 0, 0.5);
        return f += make_cos_cos(d, 0, 2, 0.5), f;
    }
    case 3: {
        SpectralField f = make_cos_cos(d, 0, 1, 0.75);
        return f += make_cos_cos(d, 0, 3, 0.25), f;
    }
    case 5: {
        SpectralField f = make_cos_cos(d, 0, 1, 10.0 / 16.0);
        f += make_cos_cos(d, 0, 3, 5.0 / 16.0);
        return f += make_cos_cos(d, 0, 5, 1.0 / 16.0), f;
    }
    default: throw ConfigError("cos_pow_y: unsupported power");
    }
}

/// Physical samples of a field on the pad x-times finer grid; all powers and
/// profile products taken pointwise here stay alias-free on the original band.
struct PaddedSamples {
    int px = 0, py = 0;
    DomainSpec target;
    std::vector<double> values;
};

inline PaddedSamples to_padded_physical(const SpectralField& f, int pad = 3) {
    const DomainSpec& d = f.domain();
    PaddedSamples s;
    s.px = pad * d.nx;
    s.py = pad * d.ny;
    s.target = d;
    SpectralField big = pad_torus(f, s.px, s.py);
    FftEngine::instance().execute(s.px, s.py, FFTW_BACKWARD, big.data().data(),
                                  big.data().data());
    s.values.resize(big.data().size());
    for (size_t i = 0; i < s.values.size(); ++i) s.values[i] = big.data()[i].real();
    return s;
}

inline SpectralField from_padded_physical(const PaddedSamples& s,
                                          const std::vector<double>& vals) {
    SpectralField big(DomainSpec::torus(s.target.delta, s.px, s.py));
    for (size_t i = 0; i < vals.size(); ++i) big.data()[i] = vals[i];
    FftEngine::instance().execute(s.px, s.py, FFTW_FORWARD, big.data().data(),
                                  big.data().data());
    const double inv = 1.0 / (double(s.px) * double(s.py));
    for (auto& c : big.data()) c *= inv;
    SpectralField out = restrict_torus(big, s.target);
    out.make_real();
    return out;
}

/// Pairings of the remainder structure against cos(x) and cos(y), split into
/// the part multiplying B and the B-independent part:
///   <R, t> = eps^2 (B J2c + J2d) + eps^3 (B J3a + J3b) + eps^4 J4 + eps^5 J5
/// with h = psi + cos x and t in {cos x, cos y}. Everything is evaluated
/// pointwise on the padded grid, where the trapezoid pairing is exact.
struct RemainderPairings {
    double J2c[2], J2d[2], J3a[2], J3b[2], J4[2], J5[2];
};

inline RemainderPairings remainder_pairings(const SpectralField& psi) {
    const DomainSpec& d = psi.domain();
    SpectralField h = psi + make_cos_cos(d, 1, 0);
    PaddedSamples s = to_padded_physical(h);
    const double cell = d.area() / double(s.values.size());
    RemainderPairings p{};
    for (int i = 0; i < s.px; ++i) {
        const double cx = std::cos(2.0 * pi * i / s.px);
        for (int j = 0; j < s.py; ++j) {
            const double cy = std::cos(2.0 * pi * j / s.py);
            const double hv = s.values[size_t(i) * s.py + j];
            const double h2 = hv * hv, h3 = h2 * hv, h4 = h2 * h2, h5 = h4 * hv;
            const double w[2] = {cx * cell, cy * cell};
            for (int t = 0; t < 2; ++t) {
                p.J2c[t] += 3.0 * h2 * cy * w[t];
                p.J2d[t] += 2.0 * h2 * cy * cy * cy * w[t];
                p.J3a[t] += h3 * w[t];
                p.J3b[t] += 2.0 * h3 * cy * cy * w[t];
                p.J4[t] += h4 * cy * w[t];
                p.J5[t] += 0.2 * h5 * w[t];
            }
        }
    }
    return p;
}

} // namespace detail

/// G = cos(y) + eps cos(x) + eps psi, the argument the nonlinearity acts on.
inline SpectralField compose_argument(const SpectralField& psi, double eps) {
    const DomainSpec& d = psi.domain();
    SpectralField g = make_cos_cos(d, 0, 1);
    g += make_cos_cos(d, 1, 0, eps);
    SpectralField p = psi;
    p *= eps;
    g += p;
    return g;
}

/// The remainder of the expansion of f(A,B;G) beyond the terms linear in eps:
///   R = eps^2 h^2 (3B cos y + 2 cos^3 y) + eps^3 h^3 (B + 2 cos^2 y)
///     + eps^4 h^4 cos y + eps^5 h^5 / 5,   h = psi + cos x,
/// evaluated with alias-free products. With this form the identity
/// f(A,B;G) = [A cos y + B cos^3 y + cos^5 y/5]
///          + eps (psi + cos x)(A + 3B cos^2 y + cos^4 y) + R holds exactly.
inline SpectralField remainder_R(double B, const SpectralField& psi, double eps) {
    const DomainSpec& d = psi.domain();
    if (eps == 0.0) return SpectralField(d);
    SpectralField h = psi + make_cos_cos(d, 1, 0);
    detail::PaddedSamples s = detail::to_padded_physical(h);
    const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps, e5 = e4 * eps;
    std::vector<double> vals(s.values.size());
    for (int i = 0; i < s.px; ++i)
        for (int j = 0; j < s.py; ++j) {
            const double cy = std::cos(2.0 * pi * j / s.py);
            const double hv = s.values[size_t(i) * s.py + j];
            const double h2 = hv * hv, h3 = h2 * hv, h4 = h2 * h2, h5 = h4 * hv;
            vals[size_t(i) * s.py + j] = e2 * h2 * (3.0 * B * cy + 2.0 * cy * cy * cy) +
                                         e3 * h3 * (B + 2.0 * cy * cy) + e4 * h4 * cy +
                                         e5 * h5 / 5.0;
        }
    return detail::from_padded_physical(s, vals);
}

struct CompatibilityResult {
    double A = 0.0, B = 0.0;
    double residual_x = 0.0; // cos x coefficient of f(A,B;G)
    double residual_y = 0.0; // cos y coefficient of f(A,B;G)
    int iterations = 0;
};

/// Solve the two compatibility conditions <f(A,B;G), cos x> = <f, cos y> = 0
/// for the quintic coefficients by the inner fixed-point iteration on the
/// closed form for B, seeded at (A,B) = (1/8, -1/3).
inline constexpr double solver_eps1 = 0.1; // validity bound for the inner solve

inline CompatibilityResult solve_AB(const SpectralField& psi, double eps) {
    const DomainSpec& d = psi.domain();
    if (eps < 0.0 || eps > solver_eps1)
        throw ConfigError("solve_AB: eps outside [0, eps1]");
    const double pi2 = pi * pi;
    const double Icc2 = inner_product(psi, cos_power_y_cos_x(d, 2));
    const double Icc4 = inner_product(psi, cos_power_y_cos_x(d, 4));
    const double I3 = inner_product(psi, detail::cos_pow_y(d, 3));
    const double I5 = inner_product(psi, detail::cos_pow_y(d, 5));
    const double v22 = 1.5 * (1.0 + Icc2 / pi2);
    if (std::abs(v22 - 0.75) < 0.1)
        throw NumericalError("solve_AB: compatibility system degenerate "
                             "(<psi, cos^2(y)cos(x)> too large)");

    std::optional<detail::RemainderPairings> rp;
    if (eps != 0.0) rp = detail::remainder_pairings(psi);

    double A = 0.125, B = -1.0 / 3.0;
    CompatibilityResult res;
    const int max_inner = 100;
    for (int it = 1; it <= max_inner; ++it) {
        double Rx = 0.0, Ry = 0.0;
        if (rp) {
            const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps, e5 = e4 * eps;
            Rx = e2 * (B * rp->J2c[0] + rp->J2d[0]) + e3 * (B * rp->J3a[0] + rp->J3b[0]) +
                 e4 * rp->J4[0] + e5 * rp->J5[0];
            Ry = e2 * (B * rp->J2c[1] + rp->J2d[1]) + e3 * (B * rp->J3a[1] + rp->J3b[1]) +
                 e4 * rp->J4[1] + e5 * rp->J5[1];
        }
        const double rhs1 = -0.125 - eps * (3.0 * B / (2.0 * pi2)) * I3 -
                            eps * I5 / (2.0 * pi2) - Ry / (2.0 * pi2);
        const double rhs2 = -0.375 * (1.0 + (4.0 / (3.0 * pi2)) * Icc4) -
                            (eps != 0.0 ? Rx / (2.0 * pi2 * eps) : 0.0);
        const double Bn = (rhs2 - rhs1) / (v22 - 0.75);
        const double An = rhs1 - 0.75 * Bn;
        const bool settled = std::abs(Bn - B) < 1e-16 && std::abs(An - A) < 1e-16;
        A = An;
        B = Bn;
        res.iterations = it;
        if (settled || eps == 0.0) break;
        if (it == max_inner)
            throw NumericalError("solve_AB: no convergence after 100 inner iterations");
    }
    res.A = A;
    res.B = B;

    // assembled residuals: the cos x / cos y coefficients of f(A,B;G)
    SpectralField G = compose_argument(psi, eps);
    SpectralField F = polynomial_evaluate(G, {0.0, A, 0.0, B, 0.0, 0.2});
    res.residual_x = inner_product(F, make_cos_cos(d, 1, 0)) / (2.0 * pi2);
    res.residual_y = inner_product(F, make_cos_cos(d, 0, 1)) / (2.0 * pi2);
    return res;
}

/// Power-series coefficients a_j, b_j of A(psi;eps), B(psi;eps): b_j follows
/// the three-term recursion induced by comparing eps powers in the closed
/// form for B; a_j then comes from the first compatibility condition.
inline SeriesCoefficients ab_series(const SpectralField& psi, int jmax) {
    const DomainSpec& d = psi.domain();
    const double pi2 = pi * pi;
    const double Icc2 = inner_product(psi, cos_power_y_cos_x(d, 2));
    const double Icc4 = inner_product(psi, cos_power_y_cos_x(d, 4));
    const double I3 = inner_product(psi, detail::cos_pow_y(d, 3));
    const double I5 = inner_product(psi, detail::cos_pow_y(d, 5));
    const auto rp = detail::remainder_pairings(psi);
    const double D = 0.75 + 1.5 * Icc2 / pi2;
    const double C0 = 0.25 + 0.5 * Icc4 / pi2;

    auto bj = [&](const std::vector<double>& b, int j) -> double {
        auto at = [&](int i) { return i >= 0 && i < int(b.size()) ? b[i] : 0.0; };
        // eps^{j+1} coefficient of <R,cos x> and eps^j coefficient of <R,cos y>
        double rx = at(j - 1) * rp.J2c[0] + at(j - 2) * rp.J3a[0];
        if (j == 1) rx += rp.J2d[0];
        if (j == 2) rx += rp.J3b[0];
        if (j == 3) rx += rp.J4[0];
        if (j == 4) rx += rp.J5[0];
        double ry = at(j - 2) * rp.J2c[1] + at(j - 3) * rp.J3a[1];
        if (j == 2) ry += rp.J2d[1];
        if (j == 3) ry += rp.J3b[1];
        if (j == 4) ry += rp.J4[1];
        if (j == 5) ry += rp.J5[1];
        double rhs = j == 0 ? -C0 : 0.0;
        rhs += (-rx + 3.0 * I3 * at(j - 1) + (j == 1 ? I5 : 0.0)) / (2.0 * pi2);
        rhs += ry / (2.0 * pi2);
        return rhs / D;
    };

    SeriesCoefficients s;
    for (int j = 0; j <= jmax; ++j) s.b.push_back(bj(s.b, j));
    for (int j = 0; j <= jmax; ++j) {
        auto at = [&](int i) { return i >= 0 && i <= jmax ? s.b[i] : 0.0; };
        double ry = at(j - 2) * rp.J2c[1] + at(j - 3) * rp.J3a[1];
        if (j == 2) ry += rp.J2d[1];
        if (j == 3) ry += rp.J3b[1];
        if (j == 4) ry += rp.J4[1];
        if (j == 5) ry += rp.J5[1];
        double a = -0.75 * s.b[j] - (j == 0 ? 0.125 : 0.0) -
                   (3.0 * I3 / (2.0 * pi2)) * at(j - 1) - (j == 1 ? I5 / (2.0 * pi2) : 0.0) -
                   ry / (2.0 * pi2);
        s.a.push_back(a);
    }
    return s;
}

struct KResult {
    SpectralField psi;
    double A = 0.0, B = 0.0;
    double compat_residual = 0.0;
};

/// One application of the contraction map: (1+Delta)^{-1} f(A,B;G) with the
/// compatibility coefficients from solve_AB, followed by the even-even
/// symmetrization. The magnitude removed on ker(1+Delta) is reported.
inline KResult apply_K(const SpectralField& psi, double eps) {
    CompatibilityResult ab = solve_AB(psi, eps);
    SpectralField G = compose_argument(psi, eps);
    SpectralField F = polynomial_evaluate(G, {0.0, ab.A, 0.0, ab.B, 0.0, 0.2});
    HelmholtzResult h = helmholtz_inverse(F);
    return {symmetrize_even_even(h.field), ab.A, ab.B, h.compatibility_residual};
}

struct StationaryState {
    SpectralField Psi; // cos y + eps cos x + eps psi
    SpectralField psi;
    QuinticNonlinearity F;
    double epsilon = 0.0;
    FixedPointReport report;
};

inline constexpr double default_eps0 = 0.05; // largest eps accepted by default

/// Iterate psi_{n+1} = K_eps(psi_n) from psi_0 = 0 until the H2 increment
/// drops below tol. Soft certificate violations are recorded as warnings;
/// hard violations abort.
inline StationaryState construct_fixed_point(const DomainSpec& domain, double eps,
                                             double tol = 1e-12, int max_iter = 200,
                                             double eps0 = default_eps0) {
    if (!domain.is_square())
        throw ConfigError("construct_fixed_point requires the square torus");
    if (eps < 0.0 || eps > eps0)
        throw ConfigError("construct_fixed_point: eps outside [0, eps0]");
    SpectralField psi(domain);
    FixedPointReport rep;
    rep.epsilon = eps;
    double prev_diff = 0.0;
    double A = 0.0, B = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        KResult k = apply_K(psi, eps);
        const double diff = norm_h2(k.psi - psi);
        psi = std::move(k.psi);
        A = k.A;
        B = k.B;
        IterateRecord ir;
        ir.iteration = it;
        ir.h2_diff = diff;
        ir.compat_residual = k.compat_residual;
        ir.certificate = make_certificate(psi);
        rep.iterates.push_back(ir);
        if (ir.certificate.hard_violation())
            throw NumericalError("fixed-point iterate left the admissible set");
        if (!ir.certificate.passes())
            rep.warnings.push_back("certificate outside nominal bounds at iteration " +
                                   std::to_string(it));
        if (it >= 2 && prev_diff > 1e-13 && diff > 1e-15)
            rep.contraction_estimates.push_back(diff / prev_diff);
        prev_diff = diff;
        if (diff < tol) {
            rep.converged = true;
            break;
        }
    }
    rep.A = A;
    rep.B = B;
    if (!rep.converged)
        throw NumericalError("construct_fixed_point: max_iter exceeded");

    StationaryState st{SpectralField(domain), psi, QuinticNonlinearity{A, B, 0.2}, eps, rep};
    st.Psi = make_cos_cos(domain, 0, 1) + make_cos_cos(domain, 1, 0, eps);
    SpectralField ep = psi;
    ep *= eps;
    st.Psi += ep;
    return st;
}

struct ExpansionFit {
    double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, b1 = 0;
    double max_residual = 0; // largest relative misfit of the mode-amplitude fits
};

namespace detail {

/// Least-squares polynomial fit v(eps) ~ sum_j p_j eps^j; returns p.
inline std::vector<double> polyfit(const std::vector<double>& eps,
                                   const std::vector<double>& v, int degree) {
    const int n = int(eps.size()), m = degree + 1;
    // normal equations, tiny m
    std::vector<double> G(m * m, 0.0), r(m, 0.0);
    for (int s = 0; s < n; ++s) {
        double pw_i = 1.0;
        for (int i = 0; i < m; ++i) {
            double pw_j = 1.0;
            for (int j = 0; j < m; ++j) {
                G[i * m + j] += pw_i * pw_j;
                pw_j *= eps[s];
            }
            r[i] += pw_i * v[s];
            pw_i *= eps[s];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> x(r);
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int i = c + 1; i < m; ++i)
            if (std::abs(G[i * m + c]) > std::abs(G[piv * m + c])) piv = i;
        if (std::abs(G[piv * m + c]) < 1e-300)
            throw NumericalError("expansion fit is ill-conditioned");
        if (piv != c) {
            for (int j = 0; j < m; ++j) std::swap(G[c * m + j], G[piv * m + j]);
            std::swap(x[c], x[piv]);
        }
        for (int i = c + 1; i < m; ++i) {
            const double f = G[i * m + c] / G[c * m + c];
            for (int j = c; j < m; ++j) G[i * m + j] -= f * G[c * m + j];
            x[i] -= f * x[c];
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        for (int j = i + 1; j < m; ++j) x[i] -= G[i * m + j] * x[j];
        x[i] /= G[i * m + i];
    }
    return x;
}

} // namespace detail

/// Fit the leading expansion structure of the fixed points across an eps
/// sweep. The cos(3y) amplitude gives c0 and b1 (through its slope -b1/32),
/// cos(5y) gives c1, and the slopes of the first-order modes give c2
/// (cos x cos 4y), c3 (cos 7y, sign convention of the -c3 cos 7y term) and
/// c4 (cos 9y).
inline ExpansionFit extrapolate_expansion(const std::vector<double>& epsilons,
                                          const std::vector<SpectralField>& psis) {
    if (epsilons.size() < 3 || epsilons.size() != psis.size())
        throw ConfigError("extrapolate_expansion needs >= 3 converged fixed points");
    const int n = int(epsilons.size());
    const int deg = std::min(3, n - 1);
    auto amp_series = [&](int k, int l) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = cos_cos_amplitude(psis[i], k, l);
        return v;
    };
    auto over_eps = [&](std::vector<double> v) {
        for (int i = 0; i < n; ++i) v[i] /= epsilons[i];
        return v;
    };
    ExpansionFit fit;
    auto p3 = detail::polyfit(epsilons, amp_series(0, 3), deg);
    fit.c0 = p3[0];
    fit.b1 = -32.0 * p3[1];
    auto p5 = detail::polyfit(epsilons, amp_series(0, 5), deg);
    fit.c1 = -p5[0];
    auto p14 = detail::polyfit(epsilons, over_eps(amp_series(1, 4)), deg);
    fit.c2 = -p14[0];
    auto p7 = detail::polyfit(epsilons, over_eps(amp_series(0, 7)), deg);
    fit.c3 = -p7[0];
    auto p9 = detail::polyfit(epsilons, over_eps(amp_series(0, 9)), deg);
    fit.c4 = p9[0];

    // residual bookkeeping: misfit of the cos(3y) fit relative to its values
    double maxres = 0.0;
    {
        auto v = amp_series(0, 3);
        for (int i = 0; i < n; ++i) {
            double pred = 0.0, pw = 1.0;
            for (double c : p3) pred += c * pw, pw *= epsilons[i];
            maxres = std::max(maxres, std::abs(pred - v[i]) / std::max(1e-300, std::abs(v[i])));
        }
    }
    fit.max_residual = maxres;
    return fit;
}

} // namespace kolm
