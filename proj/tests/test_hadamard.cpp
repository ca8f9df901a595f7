#include <cmath>
#include <complex>

#include "doctest.h"
#include "latticezeta/hadamard.hpp"
#include "latticezeta/psi.hpp"

using namespace latticezeta;
using cplx = std::complex<double>;

TEST_CASE("finite part of a pure monomial") {
    // psi(t) = t^d: only a_d nonzero; value c^{nu-d} / nu * ... = c^nu/nu
    int d = 1;
    double c = 0.4, nu = 2.3;
    cplx v = finite_part_series(nu, d, c, [&](cplx t) { return std::pow(t, d); }, 32, 1e-13);
    CHECK(std::abs(v - std::pow(c, nu) / nu) < 1e-13 * std::abs(std::pow(c, nu) / nu));
}

TEST_CASE("finite part with negative exponent: psi = 1, nu - d = -1/2") {
    int d = 1;
    double nu = 0.5, c = 0.7;
    cplx v = finite_part_series(nu, d, c, [&](cplx) { return cplx(1.0); }, 32, 1e-13);
    // =int_0^c t^{-3/2} dt = -2 c^{-1/2}
    CHECK(std::abs(v - (-2.0 / std::sqrt(c))) < 1e-13 * 2.0 / std::sqrt(c));
}

TEST_CASE("finite part of t^d e^{-t^2} matches termwise integration") {
    int d = 2;
    double c = 0.5, nu = 1.3;
    cplx v = finite_part_series(nu, d, c,
                                [&](cplx t) { return std::pow(t, d) * std::exp(-t * t); }, 32,
                                1e-13);
    // sum_k (-1)^k / k! * c^{nu+2k} / (nu + 2k)
    cplx expect = 0.0;
    double fact = 1.0;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) fact *= k;
        expect += ((k % 2) ? -1.0 : 1.0) / fact * std::pow(c, nu + 2.0 * k) / (nu + 2.0 * k);
    }
    CHECK(std::abs(v - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("pole of the continuation rejected") {
    CHECK_THROWS_AS(finite_part_series(1.0, 1, 0.5, [](cplx) { return cplx(1.0); }, 32, 1e-13),
                    PoleError);
}

TEST_CASE("tail integral closed forms") {
    // empty interval
    CHECK(std::abs(tail_integral(2.0, 1, 0.5, 2.0, [](double) { return 1.0; }, 1e-13)) == 0.0);
    // psi = t^d: ((1/lambda)^nu - c^nu)/nu
    double nu = 1.7, c = 0.2, lambda = 1.3;
    int d = 2;
    cplx v = tail_integral(nu, d, c, lambda, [&](double t) { return std::pow(t, d); }, 1e-14);
    double expect = (std::pow(1.0 / lambda, nu) - std::pow(c, nu)) / nu;
    CHECK(std::abs(v - expect) < 1e-13 * std::abs(expect));
}

TEST_CASE("choose_c degenerate cases") {
    LatticeBasis b = LatticeBasis::from_parameters(1.0);
    std::array<bool, kMaxDim> mask{};
    // x = 0: only the branch condition participates
    mask[0] = false;
    FinitePartPlan p = choose_c(b, Vec{0.0}, Vec{0.3}, mask, 13.7, 1e-12);
    double hbar = std::sqrt(-std::log(1e-12) / M_PI);
    CHECK(p.c == doctest::Approx(std::min(1.0 / 13.7, 0.3 / hbar)).epsilon(1e-12));
    // y = 0 masked coordinate: H1 and the decay condition bound c
    mask[0] = true;
    double x0 = 2.0;
    FinitePartPlan q = choose_c(b, Vec{-x0}, Vec{0.0}, mask, 13.7, 1e-12);
    double h1 = std::sqrt(1.0 / M_PI);
    double expect = std::min({1.0 / 13.7, h1 / x0, 1.0 / (x0 * std::sqrt(M_PI))});
    CHECK(q.c == doctest::Approx(expect).epsilon(1e-12));
    CHECK(q.cond_mask);
    CHECK(q.cond_decay);
}

TEST_CASE("choose_c conditions verified post hoc, d=2") {
    LatticeBasis b = LatticeBasis::from_parameters(1.0, 1.0, M_PI / 2);
    std::array<bool, kMaxDim> mask{};
    mask[0] = false;
    mask[1] = true;  // (A^T y)_2 = 0
    FinitePartPlan p = choose_c(b, Vec{-1.0, -1.0}, Vec{0.25, 0.0}, mask, 13.7, 1e-12);
    CHECK(p.c > 0.0);
    CHECK(p.cond_branch);
    CHECK(p.cond_mask);
    CHECK(p.cond_decay);
    // re-verify numerically
    CHECK(0.25 / p.c - p.c * 1.0 >= p.Hbar * (1.0 - 1e-12));
    CHECK(p.c * 1.0 <= p.H1 * (1.0 + 1e-12));
    CHECK(p.c <= 1.0 / (std::sqrt(2.0) * std::sqrt(M_PI)) + 1e-15);
}

TEST_CASE("contour coefficients converge for the corner psi") {
    // d=1 corner, compare two coefficient resolutions and split invariance
    CornerSpec corner;
    corner.basis = LatticeBasis::from_parameters(1.0);
    corner.offset = Vec{-1.0};
    PsiCornerEvaluator psi(corner.basis, corner.offset, Vec{0.0}, {});
    double c = 0.05;
    auto a32 = contour_coefficients(
        [&](cplx t) { return psi.psi_reduced(t, true); }, c, 32, 1e-13);
    auto a64 = contour_coefficients(
        [&](cplx t) { return psi.psi_reduced(t, true); }, c, 64, 1e-13);
    for (int j = 0; j < 8; ++j)
        CHECK(std::abs(a32[j] - a64[j]) < 1e-12 * std::max(1.0, std::abs(a64[j])));
}
