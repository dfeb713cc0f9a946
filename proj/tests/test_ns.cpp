#include <catch2/catch_amalgamated.hpp>

#include "kolm/ns.hpp"
#include "kolm/random.hpp"

using namespace kolm;

TEST_CASE("heat_flow: eigenmode decay and mean preservation") {
    const DomainSpec d = DomainSpec::square_torus(32);
    const double nu = 0.05;
    SpectralField cy = make_cos_cos(d, 0, 1);
    SpectralField h = heat_flow(cy, 1.0 / nu, nu);
    CHECK(cos_cos_amplitude(h, 0, 1) == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));

    SpectralField c14 = make_cos_cos(d, 1, 4);
    SpectralField h2 = heat_flow(c14, 0.1 / nu, nu);
    CHECK(cos_cos_amplitude(h2, 1, 4) == Catch::Approx(std::exp(-1.7)).epsilon(1e-13));

    SpectralField f = make_cos_cos(d, 0, 2, 0.4);
    f.at(0, 0) = 1.7;
    CHECK(heat_flow(f, 3.0, nu).mean() == 1.7);
}

TEST_CASE("step_nonlinear: bar state follows pure diffusion") {
    const DomainSpec d = DomainSpec::square_torus(64);
    const double nu = 1e-2, dt = 0.02;
    SpectralField w = make_cos_cos(d, 0, 1, -1.0);
    const int nsteps = 500; // to t = 10
    for (int n = 0; n < nsteps; ++n) w = step_nonlinear(w, dt, nu);
    const double t = nsteps * dt;
    SpectralField exact = make_cos_cos(d, 0, 1, -std::exp(-nu * t));
    CHECK(norm_l2(w - exact) < 1e-10 * norm_l2(exact));
}

TEST_CASE("step_nonlinear: shears stay shears, energy decays") {
    const DomainSpec d = DomainSpec::square_torus(32);
    SpectralField w(d);
    for (int l = 1; l <= 5; ++l) w += make_cos_cos(d, 0, l, 0.3 / l);
    w += make_cos_sin(d, 0, 2, 0.2);
    double prev = norm_l2(w);
    for (int n = 0; n < 50; ++n) {
        w = step_nonlinear(w, 0.02, 0.05);
        double offshear = 0.0;
        w.for_each([&](int k, int, const Complex& c) {
            if (k != 0) offshear += std::norm(c);
        });
        CHECK(offshear == 0.0);
        const double cur = norm_l2(w);
        CHECK(cur <= prev * (1.0 + 1e-14));
        prev = cur;
    }
}

TEST_CASE("step_nonlinear: viscous dissipativity on generic data") {
    const DomainSpec d = DomainSpec::square_torus(64);
    std::mt19937_64 rng(8);
    SpectralField w = random_field(d, rng, 0.6, 8);
    w *= 1.0 / norm_l2(w);
    double prev = norm_l2(w);
    for (int n = 0; n < 40; ++n) {
        w = step_nonlinear(w, 0.01, 0.02);
        const double cur = norm_l2(w);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("inviscid conservation of energy and enstrophy (short run)") {
    const DomainSpec d = DomainSpec::square_torus(64);
    std::mt19937_64 rng(21);
    SpectralField w = random_field(d, rng, 0.8, 7);
    w *= 1.0 / norm_l2(w);
    SpectralField psi0 = apply_multiplier(w, Multiplier::inv_laplacian);
    const double E0 = std::sqrt(-inner_product(psi0, w)); // ||u||_L2
    const double Z0 = norm_l2(w);
    SpectralField v = w;
    const double dt = 0.005;
    for (int n = 0; n < 400; ++n) v = step_nonlinear(v, dt, 0.0); // to t = 2
    SpectralField psi = apply_multiplier(v, Multiplier::inv_laplacian);
    const double E = std::sqrt(-inner_product(psi, v));
    const double Z = norm_l2(v);
    CHECK(std::abs(E - E0) / E0 < 1e-9);
    CHECK(std::abs(Z - Z0) / Z0 < 1e-9);
}

TEST_CASE("step_nonlinear: fourth-order self-convergence in dt") {
    const DomainSpec d = DomainSpec::square_torus(64);
    std::mt19937_64 rng(33);
    SpectralField w0 = random_field(d, rng, 0.8, 6);
    w0 *= 0.8 / norm_l2(w0);
    const double nu = 1e-2, T = 0.5;
    auto solve = [&](double dt) {
        SpectralField w = w0;
        const int n = int(std::lround(T / dt));
        for (int i = 0; i < n; ++i) w = step_nonlinear(w, dt, nu);
        return w;
    };
    SpectralField a = solve(0.02), b = solve(0.01), c = solve(0.005);
    const double e1 = norm_l2(a - b), e2 = norm_l2(b - c);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("step_linear_bar: kernel data evolves as pure heat") {
    const DomainSpec d = DomainSpec::square_torus(32);
    const double nu = 1e-2, dt = 0.05;
    SpectralField f = make_cos_cos(d, 1, 0, 0.7); // cos x, in ker L_K
    SpectralField g(d);
    for (int l = 1; l <= 4; ++l) g += make_cos_cos(d, 0, l, 0.1 * l);
    for (SpectralField* w0 : {&f, &g}) {
        SpectralField w = *w0;
        double t = 0.0;
        for (int n = 0; n < 100; ++n, t += dt) w = step_linear_bar(w, t, dt, nu);
        SpectralField exact = heat_flow(*w0, t, nu);
        CHECK(norm_l2(w - exact) < 1e-12 * norm_l2(exact));
    }
}

TEST_CASE("step_linear_bar: enhanced decay of the non-kernel component") {
    // rectangular torus, single non-kernel mode: by t = tau/nu the non-kernel
    // norm must sit well below the diffusive envelope exp(-nu t)||f0||
    const DomainSpec d = DomainSpec::torus(0.5, 48, 48);
    const double nu = 1e-2, dt = 0.02;
    SpectralField f0 = make_sin_sin(d, 1, 1);
    SpectralField w = f0;
    double t = 0.0;
    const double t_end = 1.0 / nu;
    while (t < t_end - 1e-12) {
        w = step_linear_bar(w, t, dt, nu);
        t += dt;
    }
    const double pd = norm_l2(project_kernel(w, Projector::P_D));
    const double envelope = std::exp(-nu * t) * norm_l2(f0);
    CHECK(pd < 0.2 * envelope);
}

TEST_CASE("run: bar state record and two-mode heat flow amplitudes") {
    const DomainSpec d = DomainSpec::square_torus(32);
    SimConfig cfg;
    cfg.nu = 1e-2;
    cfg.dt = 0.02;
    cfg.t_end = 2.0;
    cfg.domain = d;
    cfg.mode = SimMode::nonlinear;
    cfg.record_every = 10;
    cfg.epsilon_diag = 0.05;

    SpectralField bar = make_cos_cos(d, 0, 1, -1.0);
    SimulationRecord r1 = run(bar, cfg);
    for (double v : r1.l2_PD) CHECK(v < 1e-12);
    for (double v : r1.heat_deviation) CHECK(v < 1e-10);

    SpectralField two = make_cos_cos(d, 0, 1, -1.0) + make_cos_cos(d, 1, 0, -0.05);
    SimulationRecord r2 = run(two, cfg);
    for (size_t i = 0; i < r2.times.size(); ++i) {
        CHECK(r2.alpha[i] == Catch::Approx(1.0).margin(1e-8));
        CHECK(r2.beta[i] == Catch::Approx(1.0).margin(1e-8));
        CHECK(r2.heat_deviation[i] < 1e-8);
    }
}

TEST_CASE("run: inviscid energy conservation over ten time units") {
    const DomainSpec d = DomainSpec::square_torus(48);
    std::mt19937_64 rng(4);
    SpectralField w = random_field(d, rng, 0.9, 6);
    w *= 0.5 / norm_l2(w);
    SimConfig cfg;
    cfg.nu = 0.0;
    cfg.dt = 0.005;
    cfg.t_end = 10.0;
    cfg.domain = d;
    cfg.record_every = 400;
    SimulationRecord rec = run(w, cfg);
    const double z0 = std::hypot(rec.l2_PD.front(), rec.l2_PK.front());
    const double z1 = std::hypot(rec.l2_PD.back(), rec.l2_PK.back());
    CHECK(std::abs(z1 - z0) / z0 < 1e-8);
}

TEST_CASE("run: CFL violation is rejected") {
    const DomainSpec d = DomainSpec::square_torus(64);
    SimConfig cfg;
    cfg.nu = 1e-2;
    cfg.dt = 0.5; // far beyond 0.5*h/max|u|
    cfg.t_end = 1.0;
    cfg.domain = d;
    SpectralField w = make_cos_cos(d, 0, 1, -1.0);
    CHECK_THROWS_AS(run(w, cfg), ConfigError);
}

TEST_CASE("heat_flow rejects negative time; decay_rate_fit needs 3 runs") {
    const DomainSpec d = DomainSpec::square_torus(16);
    CHECK_THROWS_AS(heat_flow(make_cos_cos(d, 0, 1), -1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(decay_rate_fit({}), ConfigError);
}

TEST_CASE("decay_rate_fit: heat kernel data recovers exponent 1") {
    std::vector<SimulationRecord> recs;
    for (double nu : {1e-2, 2.5e-3, 6.25e-4}) {
        const DomainSpec d = DomainSpec::torus(0.5, 16, 16);
        SimConfig cfg;
        cfg.nu = nu;
        cfg.dt = 0.05;
        cfg.t_end = 1.0 / nu;
        cfg.domain = d;
        cfg.mode = SimMode::heat;
        cfg.record_every = std::max(1, int(cfg.t_end / cfg.dt) / 200);
        recs.push_back(run(make_cos_cos(d, 0, 1), cfg)); // kernel shear
    }
    RateFit fit = decay_rate_fit(recs);
    CHECK(fit.exponent == Catch::Approx(1.0).margin(0.05));
    CHECK(fit.c1_fit == Catch::Approx(1.0).epsilon(0.05)); // rate = nu * l^2, l = 1
    // doubling the amplitude leaves the exponent unchanged (linearity)
    std::vector<SimulationRecord> recs2;
    for (double nu : {1e-2, 2.5e-3, 6.25e-4}) {
        const DomainSpec d = DomainSpec::torus(0.5, 16, 16);
        SimConfig cfg;
        cfg.nu = nu;
        cfg.dt = 0.05;
        cfg.t_end = 1.0 / nu;
        cfg.domain = d;
        cfg.mode = SimMode::heat;
        cfg.record_every = std::max(1, int(cfg.t_end / cfg.dt) / 200);
        recs2.push_back(run(make_cos_cos(d, 0, 1, 2.0), cfg));
    }
    CHECK(decay_rate_fit(recs2).exponent == Catch::Approx(fit.exponent).margin(1e-12));
}
