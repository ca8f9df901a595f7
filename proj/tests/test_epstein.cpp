#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "latticezeta/epstein.hpp"
#include "latticezeta/reference.hpp"

using namespace latticezeta;
using cplx = std::complex<double>;

namespace {
Mat random_basis(std::mt19937& rng, int d, double cond_cap = 10.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Mat m(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = u(rng) + (i == j ? 1.5 : 0.0);
        try {
            LatticeBasis b = LatticeBasis::from_columns(m);
            if (b.condition_number() <= cond_cap) return m;
        } catch (const Error&) {
        }
    }
}
}  // namespace

TEST_CASE("d=1 full lattice gives 2 zeta(nu)") {
    LatticeBasis b = LatticeBasis::from_parameters(1.0);
    for (double nu : {1.5, 3.0, 6.0}) {
        cplx z = epstein_zeta(b, nu, Vec{0.0}, Vec{0.0});
        CHECK(std::abs(z - 2.0 * riemann_zeta(nu)) < 1e-12 * std::abs(z));
    }
}

TEST_CASE("d=2 square lattice at nu=4 equals 4 zeta(2) beta(2)") {
    LatticeBasis b = LatticeBasis::from_parameters(1.0, 1.0, M_PI / 2);
    cplx z = epstein_zeta(b, 4.0, Vec{0.0, 0.0}, Vec{0.0, 0.0});
    double expect = 4.0 * riemann_zeta(2.0) * dirichlet_beta(2.0);
    CHECK(std::abs(z - expect) < 1e-12 * expect);
}

TEST_CASE("pole at nu = d rejected") {
    LatticeBasis b = LatticeBasis::from_parameters(1.0, 1.0, M_PI / 2);
    CHECK_THROWS_AS(epstein_zeta(b, 2.0, Vec{0.0, 0.0}, Vec{0.0, 0.0}), PoleError);
}

TEST_CASE("negative even nu continuation") {
    // 2 zeta(-2) = 0; and at nu=0 the excluded-point limit gives -1
    LatticeBasis b = LatticeBasis::from_parameters(1.0);
    CHECK(std::abs(epstein_zeta(b, -2.0, Vec{0.0}, Vec{0.0})) < 1e-14);
    CHECK(std::abs(epstein_zeta(b, 0.0, Vec{0.0}, Vec{0.0}) - cplx(-1.0)) < 1e-14);
}

TEST_CASE("lambda independence (Riemann splitting invariance)") {
    std::mt19937 rng(10);
    for (int trial = 0; trial < 25; ++trial) {
        int d = 1 + trial % 3;
        LatticeBasis b = LatticeBasis::from_columns(random_basis(rng, d));
        std::uniform_real_distribution<double> ur(-0.45, 0.45);
        Vec x(d), y(d);
        for (int j = 0; j < d; ++j) {
            x[j] = ur(rng);
            y[j] = ur(rng);
        }
        double nu = d + 0.7 + trial % 3;
        EpsteinOptions o1, o2;
        o1.lambda = std::pow(b.volume, 1.0 / d);
        o2.lambda = 2.0 * o1.lambda;
        cplx z1 = epstein_zeta(b, nu, x, y, o1);
        cplx z2 = epstein_zeta(b, nu, x, y, o2);
        CHECK(std::abs(z1 - z2) < 1e-13 * std::max(1.0, std::abs(z1)));
    }
}

TEST_CASE("inversion symmetry x,y -> -x,-y") {
    std::mt19937 rng(77);
    LatticeBasis b = LatticeBasis::from_columns(random_basis(rng, 2));
    Vec x{0.21, -0.34}, y{0.13, 0.39};
    cplx z1 = epstein_zeta(b, 3.3, x, y);
    cplx z2 = epstein_zeta(b, 3.3, -1.0 * x, -1.0 * y);
    CHECK(std::abs(z1 - z2) < 1e-13 * std::abs(z1));
}

TEST_CASE("direct Dirichlet-series oracle at large nu") {
    // nu big enough that the direct sum converges quickly
    std::mt19937 rng(5);
    LatticeBasis b = LatticeBasis::from_columns(random_basis(rng, 2));
    Vec x{0.31, -0.12}, y{0.22, 0.41};
    double nu = 9.0;
    cplx direct = 0.0;
    for (int i = -60; i <= 60; ++i)
        for (int j = -60; j <= 60; ++j) {
            Vec z = matvec(b.A, Vec{double(i), double(j)});
            double r2 = (z - x).norm2();
            if (r2 < 1e-20) continue;
            direct += std::exp(cplx(0, -2 * M_PI * dot(y, z))) * std::pow(r2, -nu / 2);
        }
    cplx got = epstein_zeta(b, nu, x, y);
    CHECK(std::abs(got - direct) < 1e-11 * std::abs(direct));
}
