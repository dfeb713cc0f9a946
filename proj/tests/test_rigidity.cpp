#include <catch2/catch_amalgamated.hpp>

#include "kolm/random.hpp"
#include "kolm/rigidity.hpp"

using namespace kolm;

namespace {

// brute-force oracle: scan every mode up to a much larger band
double brute_force_cdelta(double delta, int band, int* argk = nullptr, int* argl = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= band; ++k)
        for (int l = -band; l <= band; ++l) {
            const double lam = double(k) * k / (delta * delta) + double(l) * l;
            const double m = std::abs(1.0 - 1.0 / lam);
            if (m < best) {
                best = m;
                if (argk) *argk = k;
                if (argl) *argl = l;
            }
        }
    return best;
}

// independent dense-quadrature oracle for the coercivity functional: all
// operators evaluated pointwise from the explicit sine expansion, composite
// Simpson in y, trapezoid in x (exact for trigonometric polynomials)
double av_dense_oracle(const SpectralField& omega, const ShearProfile& V, int mx, int my) {
    const int ny = omega.ny();
    struct Term {
        int k;
        std::vector<Complex> c; // sine coefficients, l = 1..ny
    };
    std::vector<Term> bands;
    for (int ix = 0; ix < omega.nx(); ++ix) {
        const int k = ix <= omega.nx() / 2 ? ix : ix - omega.nx();
        if (k == 0) continue;
        Term t;
        t.k = k;
        t.c.resize(ny);
        bool active = false;
        for (int l = 1; l <= ny; ++l) {
            t.c[l - 1] = omega.data()[size_t(ix) * ny + (l - 1)];
            if (std::abs(t.c[l - 1]) > 0) active = true;
        }
        if (active) bands.push_back(t);
    }
    auto simpson_w = [&](int j) {
        if (j == 0 || j == my) return 1.0;
        return j % 2 ? 4.0 : 2.0;
    };
    double acc = 0.0;
    for (int j = 0; j <= my; ++j) {
        const double y = -1.0 + 2.0 * double(j) / my;
        const double wy_quad = simpson_w(j) * (2.0 / my) / 3.0;
        for (int i = 0; i < mx; ++i) {
            const double x = 2.0 * pi * i / mx;
            const double wx_quad = 2.0 * pi / mx;
            // rebuild omega, psi and derivatives pointwise
            double w = 0, wx = 0, wyv = 0, p = 0, px = 0, pxy = 0, pxx = 0, py = 0;
            double lw_x = 0, lw_y = 0; // d_x(L omega), d_y(L omega)
            for (const auto& b : bands) {
                Complex cw = 0, cwy = 0, cp = 0, cpy = 0;
                for (int l = 1; l <= ny; ++l) {
                    const double fl = 0.5 * pi * l;
                    const double lam = double(b.k) * b.k + fl * fl;
                    const double s = std::sin(fl * (y + 1.0)), cc = std::cos(fl * (y + 1.0));
                    cw += b.c[l - 1] * s;
                    cwy += b.c[l - 1] * fl * cc;
                    cp += -b.c[l - 1] / lam * s;
                    cpy += -b.c[l - 1] / lam * fl * cc;
                }
                const Complex ph = std::polar(1.0, b.k * x);
                const Complex ikx(0.0, double(b.k));
                w += (cw * ph).real();
                wx += (ikx * cw * ph).real();
                wyv += (cwy * ph).real();
                p += (cp * ph).real();
                px += (ikx * cp * ph).real();
                py += (cpy * ph).real();
                pxy += (ikx * cpy * ph).real();
                pxx += (ikx * ikx * cp * ph).real();
                // L omega = V w_x - V'' p_x ; derivatives pointwise
                lw_x += ((ikx * ikx * (V.V(y) * cw - V.V2(y) * cp)) * ph).real();
                lw_y += ((ikx * (V.V1(y) * cw + V.V(y) * cwy - V.V3(y) * cp - V.V2(y) * cpy)) * ph).real();
            }
            acc += wx_quad * wy_quad * V.V1(y) * (lw_x * wyv + lw_y * wx);
        }
    }
    return acc;
}

} // namespace

TEST_CASE("coercivity_constant: derived values and oracle agreement") {
    CoercivityConstant r1 = coercivity_constant(0.5, 32);
    CHECK(r1.c_delta == 0.75);
    CHECK(r1.k == 1);
    CHECK(r1.l == 0);
    CHECK(r1.c_delta == brute_force_cdelta(0.5, 128));

    CoercivityConstant r2 = coercivity_constant(1.5, 32);
    CHECK(r2.c_delta == Catch::Approx(4.0 / 13.0).margin(1e-15));
    CHECK(r2.k == 1);
    CHECK(std::abs(r2.l) == 1);
    CHECK(r2.c_delta == brute_force_cdelta(1.5, 128));

    CoercivityConstant r3 = coercivity_constant(1.0, 32);
    CHECK(r3.c_delta == 0.0);
    CHECK(r3.kernel_collision);
    CHECK(r3.k == 1);
    CHECK(r3.l == 0);

    for (double delta : {0.3, 0.7, 1.25, 2.5}) {
        CoercivityConstant r = coercivity_constant(delta, 24);
        CHECK(r.c_delta == brute_force_cdelta(delta, 96));
    }
}

TEST_CASE("sin_identity_check: closed forms and random fields") {
    const DomainSpec d = DomainSpec::square_torus(32);
    SinIdentity a = sin_identity_check(make_cos_cos(d, 0, 3));
    CHECK(a.lhs == Catch::Approx(pi * pi).epsilon(1e-13));
    CHECK(a.rhs == Catch::Approx(pi * pi).epsilon(1e-13));

    SpectralField one(d);
    one.at(0, 0) = 1.0;
    SinIdentity b = sin_identity_check(one);
    CHECK(b.rhs == Catch::Approx(2.0 * pi * pi).epsilon(1e-13));
    CHECK(b.lhs == Catch::Approx(b.rhs).epsilon(1e-13));

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        SpectralField f = random_field(d, rng, 0.4, 10, true);
        SinIdentity r = sin_identity_check(f);
        CHECK(std::abs(r.lhs - r.rhs) < 1e-12 * r.rhs);
    }
}

TEST_CASE("channel_poisson_solve: eigenfunction, residual, boundary values") {
    const DomainSpec d = DomainSpec::channel(16, 24);
    SpectralField omega(d);
    omega.at(1, 1) = Complex(0, -0.5); // sin x sin(pi(y+1)/2)
    omega.at(-1, 1) = Complex(0, 0.5);
    SpectralField psi = channel_poisson_solve(omega);
    const double lam = 1.0 + pi * pi / 4.0;
    for (int k : {1, -1})
        CHECK(std::abs(psi.at(k, 1) + omega.at(k, 1) / lam) < 1e-15);

    std::mt19937_64 rng(3);
    SpectralField w = random_channel_field(d, rng, 4, 8);
    SpectralField p = channel_poisson_solve(w);
    CHECK(norm_l2(apply_multiplier(p, Multiplier::laplacian) - w) < 1e-12 * norm_l2(w));

    // psi(x, +-1) = 0: evaluate the sine reconstruction at the walls
    for (double y : {-1.0, 1.0}) {
        double worst = 0.0;
        for (int ix = 0; ix < d.nx; ++ix) {
            Complex v = 0.0;
            for (int l = 1; l <= d.ny; ++l)
                v += p.data()[size_t(ix) * d.ny + (l - 1)] *
                     std::sin(0.5 * pi * l * (y + 1.0));
            worst = std::max(worst, std::abs(v));
        }
        CHECK(worst < 1e-14);
    }

    SpectralField bad = w;
    bad.at(0, 2) = 0.3;
    CHECK_THROWS_AS(channel_poisson_solve(bad), ConfigError);
}

TEST_CASE("A_V: zero field, dense-quadrature oracle, quadratic homogeneity") {
    const DomainSpec d = DomainSpec::channel(16, 16);
    ShearProfile P = ShearProfile::poiseuille();

    SpectralField zero(d);
    CoercivityReport rz = A_V(zero, P);
    CHECK(rz.A_V == 0.0);
    CHECK(rz.lower_ok);

    // single mode sin x sin(pi(y+1)/2)
    SpectralField omega(d);
    omega.at(1, 1) = Complex(0, -0.5);
    omega.at(-1, 1) = Complex(0, 0.5);
    CoercivityReport r1 = A_V(omega, P);
    const double oracle = av_dense_oracle(omega, P, 64, 20000);
    CHECK(r1.A_V == Catch::Approx(oracle).epsilon(1e-10));

    std::mt19937_64 rng(11);
    SpectralField w = random_channel_field(d, rng, 4, 6);
    CoercivityReport rw = A_V(w, P);
    const double ow = av_dense_oracle(w, P, 64, 20000);
    CHECK(rw.A_V == Catch::Approx(ow).epsilon(1e-9));

    SpectralField w2 = w;
    w2 *= 3.0;
    CoercivityReport r9 = A_V(w2, P);
    CHECK(r9.A_V == Catch::Approx(9.0 * rw.A_V).epsilon(1e-12));

    // perturbed admissible profile also agrees with the oracle
    ShearProfile Vp = ShearProfile::perturbed(0.01, 2.0);
    CoercivityReport rp = A_V(w, Vp);
    const double op = av_dense_oracle(w, Vp, 64, 20000);
    CHECK(rp.A_V == Catch::Approx(op).epsilon(1e-9));
}

TEST_CASE("A_V rejects inadmissible shear profiles") {
    const DomainSpec d = DomainSpec::channel(16, 16);
    SpectralField w(d);
    w.at(1, 1) = Complex(0, -0.5);
    w.at(-1, 1) = Complex(0, 0.5);
    // amplitude 1 perturbation at frequency 2: |V'''| ~ 8, far from Poiseuille
    CHECK_THROWS_AS(A_V(w, ShearProfile::perturbed(1.0, 2.0)), ConfigError);
}

TEST_CASE("coercivity_constant rejects a too-small scan bound") {
    CHECK_THROWS_AS(coercivity_constant(0.5, 8), ConfigError);
}

TEST_CASE("coercivity_test: chain holds on every sample") {
    CoercivityCampaign camp = coercivity_test(25, 0.0, 12345);
    CHECK(camp.lower_violations == 0);
    CHECK(camp.intermediate_violations == 0);
    CHECK(camp.empirical_c1 > 0.0);
    CHECK(camp.max_upper_constant > 0.0);
    for (const auto& s : camp.records) {
        CHECK(s.report.lower_ok);
        CHECK(s.report.intermediate_ok);
    }

    CoercivityCampaign camp2 = coercivity_test(15, 0.05, 999);
    CHECK(camp2.lower_violations == 0);
    CHECK(camp2.intermediate_violations == 0);
}
