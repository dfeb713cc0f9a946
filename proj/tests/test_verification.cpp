#include <catch2/catch_amalgamated.hpp>

#include "kolm/random.hpp"
#include "kolm/verification.hpp"

using namespace kolm;

TEST_CASE("stationarity_residual: shears and Laplacian eigenfunctions") {
    const DomainSpec d = DomainSpec::square_torus(64);
    CHECK(stationarity_residual(make_cos_cos(d, 0, 1)).l2 < 1e-13);

    SpectralField eig = make_cos_cos(d, 0, 1) + make_cos_cos(d, 1, 0, 0.01) +
                        make_sin_cos(d, 1, 0, 0.004);
    CHECK(stationarity_residual(eig).l2 < 1e-13);

    std::mt19937_64 rng(5);
    SpectralField shear(d);
    for (int l = 1; l <= 6; ++l) shear += make_cos_cos(d, 0, l, 0.3 / l);
    CHECK(stationarity_residual(shear).l2 < 1e-13);
    CHECK(stationarity_residual(shear).linf < 1e-13);
}

TEST_CASE("stationarity_residual: constructed states are stationary") {
    const DomainSpec d = DomainSpec::square_torus(64);
    StationaryState st = construct_fixed_point(d, 0.01);
    StationarityResidual r = stationarity_residual(st.Psi);
    CHECK(r.l2_relative < 1e-9);
}

TEST_CASE("equation_residual: linear states and the constructed pair") {
    const DomainSpec d = DomainSpec::square_torus(64);
    const std::array<double, 6> lin{0, -1, 0, 0, 0, 0};
    CHECK(equation_residual(make_cos_cos(d, 0, 1), lin) < 1e-14);
    SpectralField tilted = make_cos_cos(d, 0, 1) + make_cos_cos(d, 1, 0, 0.3);
    CHECK(equation_residual(tilted, lin) < 1e-14);

    StationaryState st = construct_fixed_point(d, 0.01);
    CHECK(equation_residual(st.Psi, st.F.full_poly(st.epsilon)) < 1e-9);
}

TEST_CASE("catseye_projection: shear gives zero, constructed states -eps^2 pi^2/128") {
    const DomainSpec d = DomainSpec::square_torus(64);
    CHECK(catseye_projection(make_cos_cos(d, 0, 1)) == 0.0);

    std::vector<double> ratios;
    for (double eps : {0.005, 0.01, 0.02}) {
        StationaryState st = construct_fixed_point(d, eps);
        const double v = catseye_projection(st.Psi);
        const double target = -eps * eps * pi * pi / 128.0;
        ratios.push_back(v / (eps * eps));
        CHECK(v / target > 0.95);
        CHECK(v / target < 1.05);
    }
    // value/eps^2 approaches -pi^2/128 with O(eps) drift: deviations shrink
    const double lim = -pi * pi / 128.0;
    CHECK(std::abs(ratios[0] - lim) < std::abs(ratios[2] - lim));
}

TEST_CASE("gevrey_radius_fit: synthetic exponential shear") {
    const DomainSpec d = DomainSpec::square_torus(64);
    SpectralField f(d);
    for (int l = 1; l <= 16; ++l) f += make_cos_cos(d, 0, l, std::exp(-0.5 * l));
    GevreyFit g = gevrey_radius_fit(f);
    CHECK(g.lambda == Catch::Approx(0.5).margin(1e-3));
    CHECK(g.fit_residual < 1e-10);
}

TEST_CASE("gevrey_radius_fit: single mode is degenerate") {
    const DomainSpec d = DomainSpec::square_torus(64);
    CHECK_THROWS_AS(gevrey_radius_fit(make_cos_cos(d, 0, 1)), NumericalError);
}

TEST_CASE("gevrey_radius_fit: scale invariance") {
    const DomainSpec d = DomainSpec::square_torus(64);
    SpectralField f(d);
    for (int l = 1; l <= 12; ++l) f += make_cos_cos(d, 0, l, std::exp(-0.7 * l));
    const double l1 = gevrey_radius_fit(f).lambda;
    f *= 137.0;
    const double l2 = gevrey_radius_fit(f).lambda;
    CHECK(std::abs(l1 - l2) < 1e-10);
}

TEST_CASE("gevrey_radius_fit: uniform analyticity radius across the eps sweep") {
    const DomainSpec d = DomainSpec::square_torus(64);
    std::vector<double> lambdas;
    for (double eps : {0.005, 0.01, 0.02})
        lambdas.push_back(gevrey_radius_fit(construct_fixed_point(d, eps).psi).lambda);
    for (double l : lambdas) CHECK(l > 0.0);
    const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    CHECK(lmax / lmin < 2.0);
}

TEST_CASE("obstruction_bracket: resonant coefficient (3/2) a^2") {
    const DomainSpec d = DomainSpec::square_torus(64);
    auto r = obstruction_bracket(d, 0.1, 2);
    CHECK(r.resonant_coeff == Catch::Approx(0.015).margin(1e-12));

    CHECK(norm_l2(obstruction_bracket(d, 0.0, 3).field) == 0.0);

    auto r2 = obstruction_bracket(d, 0.2, 2);
    CHECK(r2.resonant_coeff == Catch::Approx(0.06).margin(1e-12));

    // exactly quadratic homogeneity at three amplitudes
    for (double a : {0.05, 0.1, 0.2}) {
        auto rr = obstruction_bracket(d, a, 2);
        CHECK(rr.resonant_coeff == Catch::Approx(1.5 * a * a).margin(1e-12));
    }

    // general l: coefficient (l - 1/l) a^2 of sin x cos(l y)
    auto r3 = obstruction_bracket(d, 0.1, 3);
    CHECK(r3.resonant_coeff == Catch::Approx((3.0 - 1.0 / 3.0) * 0.01).margin(1e-12));
}
