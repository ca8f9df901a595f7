#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "latticezeta/chebfit.hpp"
#include "latticezeta/quadrature.hpp"

using namespace latticezeta;
using cplx = std::complex<double>;

TEST_CASE("fit reproduces an exact cubic monomial") {
    double c = 0.4, d = 0.7;
    auto fit = chebyshev_monomial_fit(
        [&](double x) { return cplx(std::pow(x - c, 3)); }, c, d);
    // coefficient of u^3 is delta^3 in the scaled variable
    CHECK(std::abs(fit.coeff[3] - d * d * d) < 1e-13);
    for (int n = 0; n < static_cast<int>(fit.coeff.size()); ++n) {
        if (n == 3) continue;
        CHECK(std::abs(fit.coeff[n]) < 1e-13);
    }
}

TEST_CASE("fit of exp matches Taylor about the center") {
    double c = 0.3, d = 0.5;
    auto fit = chebyshev_monomial_fit([&](double x) { return cplx(std::exp(x)); }, c, d);
    double fac = 1.0;
    for (int n = 0; n <= 8; ++n) {
        if (n > 0) fac *= n;
        double taylor = std::exp(c) * std::pow(d, n) / fac;  // scaled-variable coefficient
        CHECK(std::abs(fit.coeff[n] - taylor) < 1e-11 * std::max(1.0, std::abs(taylor)));
    }
}

TEST_CASE("fit flags a function with a nearby pole") {
    double c = 0.0, d = 1.0;
    CHECK_THROWS_AS(chebyshev_monomial_fit(
                        [&](double x) { return cplx(1.0 / (x - 1.08)); }, c, d, 20, 1e-13),
                    FitFailed);
}

TEST_CASE("cauchy moments: p0 against quadrature, z off the interval") {
    cplx z(3.0, 2.0);
    auto p = cauchy_moments(-1.0, 1.0, 0.0, z, 0);
    auto res = adaptive_integrate([&](double x) { return 1.0 / (x - z); }, -1, 1, 1e-15);
    CHECK(std::abs(p[0] - res.value) < 1e-13);
}

TEST_CASE("cauchy moments: Sokhotski-Plemelj at the center") {
    auto pp = cauchy_moments(-1.0, 1.0, 0.0, cplx(0.0, 0.0), 0, CauchySide::Plus);
    auto pm = cauchy_moments(-1.0, 1.0, 0.0, cplx(0.0, 0.0), 0, CauchySide::Minus);
    CHECK(pp[0].imag() == doctest::Approx(M_PI));
    CHECK(pm[0].imag() == doctest::Approx(-M_PI));
    // p0+ + p0- = 2 PV = 0 here by symmetry
    CHECK(std::abs(pp[0] + pm[0]) < 1e-14);
}

TEST_CASE("moment recurrence vs quadrature, contour-deformed oracle") {
    // z just above the interval: integrate along real axis with fine tolerance
    cplx z(0.0, 0.01);
    int N = 6;
    auto p = cauchy_moments(-1.0, 1.0, 0.0, z, N);
    for (int n = 1; n <= N; ++n) {
        auto res = adaptive_integrate(
            [&](double x) { return std::pow(x, n) / (x - z); }, -1, 1, 1e-14, 1e-13, 40000);
        CHECK(std::abs(p[n] - res.value) < 1e-11 * std::max(1.0, std::abs(res.value)));
    }
}

TEST_CASE("moment recurrence vs quadrature on random instances") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> ul(-3.0, -0.2), ur(0.2, 3.0), uim(0.05, 2.0);
    for (int i = 0; i < 100; ++i) {
        double a = ul(rng), b = ur(rng);
        double c = 0.5 * (a + b);
        cplx z(c + 0.3 * (b - a) * (ur(rng) / 3.0 - 0.5), uim(rng) * (i % 2 ? 1 : -1));
        int N = 1 + static_cast<int>(rng() % 20);
        auto p = cauchy_moments(a, b, c, z, N);
        for (int n : {0, N / 2, N}) {
            auto res = adaptive_integrate(
                [&](double x) { return std::pow(x - c, n) / (x - z); }, a, b, 1e-14, 1e-13,
                40000);
            CHECK(std::abs(p[n] - res.value) < 1e-10 * std::max(1.0, std::abs(res.value)));
        }
    }
}
