#pragma once

#include <functional>

#include "kolm/verification.hpp"

namespace kolm {

// leading expansion amplitudes of the constructed states; the cos(3y) and
// cos(5y) vorticity modes of Omega_eps start at -9*c0*eps and 25*c1*eps
inline constexpr double expansion_c0 = 1.0 / 384.0;
inline constexpr double expansion_c1 = 1.0 / 1920.0;

enum class SimMode { nonlinear, linear_bar, heat };

struct SimConfig {
    double nu = 1e-2;
    double dt = 1e-2;
    double t_end = 1.0;
    DomainSpec domain = DomainSpec::square_torus(64);
    SimMode mode = SimMode::nonlinear;
    int record_every = 1;
    double epsilon_diag = 0.0; // scale used for the beta/gamma/delta amplitudes
};

struct SimulationRecord {
    SimConfig config;
    std::vector<double> times;
    std::vector<double> l2_PD, l2_PK;
    std::vector<double> heat_deviation;
    std::vector<double> alpha, beta, gamma, delta;
    std::vector<double> probe13, probe15;
};

/// Exact heat semigroup: multiply mode (k,l) by exp(-nu t (k^2/delta^2 + l^2)).
inline SpectralField heat_flow(const SpectralField& omega0, double t, double nu) {
    if (t < 0.0) throw ConfigError("heat_flow: negative time");
    const DomainSpec& d = omega0.domain();
    SpectralField g = omega0;
    g.for_each([&](int k, int l, Complex& c) { c *= std::exp(-nu * t * d.lam(k, l)); });
    return g;
}

/// sin(y)(1 + inv_laplacian) d_x f, the linearization around the Kolmogorov
/// flow, applied exactly in spectral space.
inline SpectralField apply_LK(const SpectralField& f) {
    detail::require_torus(f, "apply_LK");
    const DomainSpec& d = f.domain();
    SpectralField g(d);
    f.for_each([&](int k, int l, const Complex& c) {
        if (k == 0) return;
        const double lam = d.lam(k, l);
        g.at(k, l) = Complex(0.0, k / d.delta) * (1.0 - 1.0 / lam) * c;
    });
    return mul_sin_y(g);
}

namespace detail {

inline void check_finite(const SpectralField& f, const char* where) {
    double s = 0.0;
    for (const auto& c : f.data()) s += std::norm(c);
    if (!std::isfinite(s)) throw NumericalError(std::string(where) + ": solution blew up");
}

/// One integrating-factor RK4 step for d/dt w = nu Laplacian w + N(t, w);
/// diffusion is exact through the semigroup multiplier at half steps.
template <class NL>
SpectralField ifrk4_step(const SpectralField& w, double t, double dt, double nu, NL&& N) {
    const DomainSpec& d = w.domain();
    // half-step semigroup, evaluated once
    std::vector<double> e_half(w.data().size());
    {
        size_t i = 0;
        w.for_each([&](int k, int l, const Complex&) {
            e_half[i++] = std::exp(-0.5 * nu * dt * d.lam(k, l));
        });
    }
    auto E = [&](const SpectralField& f, bool full) {
        SpectralField g = f;
        for (size_t i = 0; i < g.data().size(); ++i) {
            const double m = full ? e_half[i] * e_half[i] : e_half[i];
            g.data()[i] *= m;
        }
        return g;
    };
    SpectralField k1 = N(t, w);
    k1 *= dt;
    SpectralField half = w;
    SpectralField tmp = k1;
    tmp *= 0.5;
    half += tmp;
    SpectralField k2 = N(t + 0.5 * dt, E(half, false));
    k2 *= dt;
    SpectralField Ew = E(w, false);
    tmp = k2;
    tmp *= 0.5;
    SpectralField k3 = N(t + 0.5 * dt, Ew + tmp);
    k3 *= dt;
    SpectralField k4 = N(t + dt, E(Ew + k3, false));
    k4 *= dt;
    // w+ = E2 w + (E2 k1 + 2 E(k2+k3) + k4)/6  with E = exp(dt L/2)
    SpectralField out = E(w, true);
    SpectralField acc = E(k1, true);
    SpectralField mid = k2 + k3;
    mid = E(mid, false);
    mid *= 2.0;
    acc += mid;
    acc += k4;
    acc *= 1.0 / 6.0;
    out += acc;
    return out;
}

} // namespace detail

/// One step of the vorticity equation d_t w + u.grad w = nu Laplacian w.
/// The advective term is explicit, diffusion exact; the mean is pinned.
inline SpectralField step_nonlinear(const SpectralField& omega, double dt, double nu) {
    const double mean0 = omega.mean();
    SpectralField out = detail::ifrk4_step(
        omega, 0.0, dt, nu, [](double, const SpectralField& w) {
            SpectralField psi = apply_multiplier(w, Multiplier::inv_laplacian);
            SpectralField adv = advect(psi, w);
            adv *= -1.0;
            adv.at(0, 0) = 0.0;
            return adv;
        });
    out.at(0, 0) = mean0; // the mean is untouched by transport and diffusion
    detail::check_finite(out, "step_nonlinear");
    return out;
}

/// One step of the linearized bar-state equation
/// d_t f + exp(-nu t) L_K f = nu Laplacian f, with the time-dependent factor
/// evaluated at the RK stage times.
inline SpectralField step_linear_bar(const SpectralField& f, double t, double dt, double nu) {
    SpectralField out = detail::ifrk4_step(
        f, t, dt, nu, [nu](double s, const SpectralField& w) {
            SpectralField g = apply_LK(w);
            g *= -std::exp(-nu * s);
            return g;
        });
    detail::check_finite(out, "step_linear_bar");
    return out;
}

/// Largest velocity magnitude of the flow with vorticity omega.
inline double max_speed(const SpectralField& omega) {
    SpectralField psi = apply_multiplier(omega, Multiplier::inv_laplacian);
    auto [u1, u2] = perp_gradient(psi);
    PhysicalField v1 = to_physical(u1), v2 = to_physical(u2);
    double m = 0.0;
    for (size_t i = 0; i < v1.size(); ++i)
        m = std::max(m, std::hypot(v1[i], v2[i]));
    return m;
}

using RecordCallback = std::function<void(double, const SpectralField&)>;

/// Integrate to t_end recording diagnostics every record_every steps; the
/// optional callback fires at every recorded time (snapshot hooks).
inline SimulationRecord run(const SpectralField& omega0, const SimConfig& config,
                            const RecordCallback& on_record = {}) {
    if (!(omega0.domain() == config.domain)) throw ConfigError("run: domain mismatch");
    if (config.dt <= 0.0 || config.t_end <= 0.0 || config.record_every < 1)
        throw ConfigError("run: dt, t_end, record_every must be positive");
    if (config.mode == SimMode::nonlinear) {
        const DomainSpec& d = config.domain;
        const double h = std::min(2.0 * pi * d.delta / d.nx, 2.0 * pi / d.ny);
        const double u0 = max_speed(omega0);
        if (u0 > 0.0 && config.dt > 0.5 * h / u0)
            throw ConfigError("run: dt violates the advective CFL bound 0.5*h/max|u|");
    } else if (config.mode == SimMode::linear_bar) {
        // explicit treatment of exp(-nu t) L_K: spectral radius ~ nx/(2 delta)
        const double rad = 0.5 * config.domain.nx / config.domain.delta;
        if (config.dt * rad > 2.8)
            throw ConfigError("run: dt too large for the explicit linearized term");
    }

    SimulationRecord rec;
    rec.config = config;
    const double c0 = expansion_c0, c1 = expansion_c1, eps = config.epsilon_diag;
    SpectralField s13 = make_sin_sin(config.domain, 1, 3);
    SpectralField s15 = make_sin_sin(config.domain, 1, 5);

    auto record = [&](double t, const SpectralField& w) {
        rec.times.push_back(t);
        rec.l2_PD.push_back(norm_l2(project_kernel(w, Projector::P_D)));
        rec.l2_PK.push_back(norm_l2(project_kernel(w, Projector::P_K)));
        rec.heat_deviation.push_back(norm_l2(w - heat_flow(omega0, t, config.nu)));
        const double e1 = std::exp(config.nu * t);
        const double e9 = std::exp(9.0 * config.nu * t), e25 = std::exp(25.0 * config.nu * t);
        rec.alpha.push_back(-cos_cos_amplitude(w, 0, 1) * e1);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.beta.push_back(eps > 0.0 ? -cos_cos_amplitude(w, 1, 0) * e1 / eps : nan);
        rec.gamma.push_back(eps > 0.0 ? -cos_cos_amplitude(w, 0, 3) * e9 / (9.0 * c0 * eps) : nan);
        rec.delta.push_back(eps > 0.0 ? cos_cos_amplitude(w, 0, 5) * e25 / (25.0 * c1 * eps) : nan);
        rec.probe13.push_back(inner_product(w, s13));
        rec.probe15.push_back(inner_product(w, s15));
        if (on_record) on_record(t, w);
    };

    SpectralField w = omega0;
    record(0.0, w);
    const long nsteps = long(std::ceil(config.t_end / config.dt - 1e-9));
    for (long n = 1; n <= nsteps; ++n) {
        const double t = double(n - 1) * config.dt;
        switch (config.mode) {
        case SimMode::nonlinear: w = step_nonlinear(w, config.dt, config.nu); break;
        case SimMode::linear_bar: w = step_linear_bar(w, t, config.dt, config.nu); break;
        case SimMode::heat: w = heat_flow(omega0, double(n) * config.dt, config.nu); break;
        }
        if (n % config.record_every == 0 || n == nsteps) record(double(n) * config.dt, w);
    }
    return rec;
}

struct NoDecayResult {
    SimulationRecord record;
    double min_ratio = 0.0;
    SimulationRecord control_record;
    double control_min_ratio = 0.0;
    double eps_effective = 0.0;
    double max_heat_deviation = 0.0; // over [0, 1/nu], main run
};

namespace detail {

inline double min_ratio_over_window(const SimulationRecord& rec, double t_lo, double t_hi) {
    const double base = rec.l2_PD.front();
    if (base <= 0.0) throw NumericalError("no_decay: initial non-kernel component vanishes");
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rec.times.size(); ++i)
        if (rec.times[i] >= t_lo - 1e-12 && rec.times[i] <= t_hi + 1e-12)
            m = std::min(m, rec.l2_PD[i] / base);
    return m;
}

} // namespace detail

/// Start Navier-Stokes from the constructed stationary vorticity and measure
/// how much of the non-kernel component survives up to the diffusive time
/// 1/nu; a generic-data control run provides the comparison. The perturbation
/// size follows the schedule eps = min(eps_user, nu/10).
inline NoDecayResult no_decay_experiment(double eps_user, double nu, int resolution,
                                         double tol = 1e-12) {
    const DomainSpec d = DomainSpec::square_torus(resolution);
    NoDecayResult res;
    res.eps_effective = std::min(eps_user, nu / 10.0);

    StationaryState st = construct_fixed_point(d, res.eps_effective, tol);
    SpectralField omega0 = apply_multiplier(st.Psi, Multiplier::laplacian);

    SimConfig cfg;
    cfg.nu = nu;
    cfg.domain = d;
    cfg.mode = SimMode::nonlinear;
    cfg.t_end = 1.0 / nu;
    cfg.epsilon_diag = res.eps_effective;
    const double h = 2.0 * pi / resolution;
    cfg.dt = 0.4 * h / std::max(1.0, max_speed(omega0));
    const long nsteps = long(std::ceil(cfg.t_end / cfg.dt));
    cfg.record_every = int(std::max(1L, nsteps / 512));

    res.record = run(omega0, cfg);
    res.min_ratio = detail::min_ratio_over_window(res.record, 0.5 / nu, 1.0 / nu);
    for (double dev : res.record.heat_deviation)
        res.max_heat_deviation = std::max(res.max_heat_deviation, dev);

    SpectralField control = make_cos_cos(d, 0, 1, -1.0) +
                            make_sin_sin(d, 1, 1, -res.eps_effective);
    res.control_record = run(control, cfg);
    res.control_min_ratio = detail::min_ratio_over_window(res.control_record, 0.5 / nu, 1.0 / nu);
    return res;
}

struct RateFit {
    double exponent = 0.0; // log-log slope of decay rate against nu
    double c1_fit = 0.0;   // prefactor exp(intercept)
    std::vector<double> rates;
    std::vector<bool> monotone;
};

/// Fit per-run decay rates of the non-kernel L2 norm over t in
/// [nu^{-1/2}, t_end], then regress log(rate) on log(nu).
inline RateFit decay_rate_fit(const std::vector<SimulationRecord>& records) {
    if (records.size() < 3)
        throw ConfigError("decay_rate_fit needs at least 3 viscosities");
    RateFit fit;
    std::vector<double> lognu, lograte;
    for (const auto& rec : records) {
        const double nu = rec.config.nu;
        const double t_lo = 1.0 / std::sqrt(nu);
        const bool use_pd = rec.l2_PD.front() > 1e-14;
        std::vector<double> ts, ln;
        bool mono = true;
        double prev = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < rec.times.size(); ++i) {
            const double v = use_pd ? rec.l2_PD[i]
                                    : std::hypot(rec.l2_PD[i], rec.l2_PK[i]);
            if (rec.times[i] < t_lo || v <= 0.0) continue;
            ts.push_back(rec.times[i]);
            ln.push_back(std::log(v));
            if (v > prev * (1.0 + 1e-9)) mono = false;
            prev = v;
        }
        if (ts.size() < 4) throw NumericalError("decay_rate_fit: window too short");
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            sx += ts[i];
            sy += ln[i];
            sxx += ts[i] * ts[i];
            sxy += ts[i] * ln[i];
        }
        const double n = double(ts.size());
        const double rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        fit.rates.push_back(rate);
        fit.monotone.push_back(mono);
        if (rate <= 0.0) continue; // non-decaying window: excluded from the fit
        lognu.push_back(std::log(nu));
        lograte.push_back(std::log(rate));
    }
    if (lognu.size() < 3)
        throw NumericalError("decay_rate_fit: rate extraction failed on too many runs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lognu.size(); ++i) {
        sx += lognu[i];
        sy += lograte[i];
        sxx += lognu[i] * lognu[i];
        sxy += lognu[i] * lograte[i];
    }
    const double n = double(lognu.size());
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.c1_fit = std::exp((sy - fit.exponent * sx) / n);
    return fit;
}

} // namespace kolm
