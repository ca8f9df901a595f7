#pragma once

// Reference Dirichlet-type functions used by the verification suites:
// Hurwitz zeta via Euler-Maclaurin tail summation for s >= -1/4, and via
// Hurwitz's reflection formula (with the rational-q residue expansion) for
// the strongly negative continuation. zeta(s), beta(s), A(s), B(s) are
// built on top. Valid for |s| <= 60.

#include <array>
#include <cmath>

#include "latticezeta/errors.hpp"

namespace latticezeta {

namespace detail {

// B_2, B_4, ..., B_62 via tangent numbers (Knuth-Buckholtz recurrence,
// additive and cancellation-free).
inline const std::array<long double, 31>& bernoulli_even() {
    static const std::array<long double, 31> table = [] {
        constexpr int m = 31;
        std::array<long double, m + 1> t{};
        t[1] = 1.0L;
        for (int k = 2; k <= m; ++k) t[k] = (k - 1) * t[k - 1];
        for (int k = 2; k <= m; ++k)
            for (int j = k; j <= m; ++j) t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
        std::array<long double, 31> b{};
        long double four_n = 4.0L;  // 4^n
        for (int n = 1; n <= m; ++n) {
            long double sign = (n % 2 == 1) ? 1.0L : -1.0L;
            b[n - 1] = sign * t[n] * (2.0L * n) / (four_n * (four_n - 1.0L));
            four_n *= 4.0L;
        }
        return b;
    }();
    return table;
}

// Euler-Maclaurin evaluation; accurate for s >= -1/4 (mild cancellation only).
inline double hurwitz_zeta_em(double s, double q) {
    const int K = 40;
    const auto& bern = bernoulli_even();
    long double ls = s, lq = q;
    long double sum = 0.0L;
    for (int k = K - 1; k >= 0; --k) sum += powl(lq + k, -ls);
    long double kq = lq + K;
    sum += powl(kq, 1.0L - ls) / (ls - 1.0L);
    sum += 0.5L * powl(kq, -ls);
    long double poch = ls;  // (s)_{2j-1}, starting at j = 1
    long double kpow = powl(kq, -ls - 1.0L);
    long double fact = 2.0L;  // (2j)!
    for (int j = 1; j <= 31; ++j) {
        long double term = bern[j - 1] / fact * poch * kpow;
        sum += term;
        if (fabsl(term) < 1e-20L * (fabsl(sum) + 1e-300L)) break;
        poch *= (ls + 2 * j - 1) * (ls + 2 * j);
        kpow /= kq * kq;
        fact *= (2 * j + 1) * (2 * j + 2);
    }
    return static_cast<double>(sum);
}

}  // namespace detail

// Hurwitz zeta(s, q) on the continuation, real s in [-60, 60] away from the
// pole at s = 1, 0 < q <= 1. The strongly negative range requires rational q
// (denominator <= 64), which covers every combination the suites use.
inline double hurwitz_zeta(double s, double q) {
    if (std::abs(s - 1.0) < 1e-6) throw PoleError("hurwitz zeta at s = 1");
    if (!(q > 0.0) || q > 1.0 + 1e-12) throw DomainError("hurwitz zeta needs 0 < q <= 1");
    if (s >= -0.25) return detail::hurwitz_zeta_em(s, q);

    // reflection: zeta(1-t, p/r) = 2 Gamma(t)/(2 pi r)^t
    //             * sum_{m=1}^{r} cos(2 pi m p / r - pi t / 2) zeta(t, m/r)
    int r = 0, p = 0;
    for (int rr = 1; rr <= 64; ++rr) {
        double pr = q * rr;
        if (std::abs(pr - std::llround(pr)) < 1e-9) {
            r = rr;
            p = static_cast<int>(std::llround(pr));
            break;
        }
    }
    if (r == 0) throw DomainError("analytic continuation needs rational q (den <= 64)");
    double t = 1.0 - s;
    long double acc = 0.0L;
    for (int m = 1; m <= r; ++m) {
        double zm = detail::hurwitz_zeta_em(t, static_cast<double>(m) / r);
        acc += (long double)(std::cos(2.0 * M_PI * m * p / r - M_PI * t / 2.0)) * zm;
    }
    long double pref = 2.0L * expl((long double)std::lgamma(t) -
                                   (long double)t * logl(2.0L * (long double)M_PI * r));
    return static_cast<double>(pref * acc);
}

inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

// beta(s) = sum (-1)^n (2n+1)^{-s}
inline double dirichlet_beta(double s) {
    return std::exp(-s * std::log(4.0)) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75));
}

// A(s) = sum_{n>=0} (-1)^n (4n+1)^{-s}
inline double glasser_A(double s) {
    return std::exp(-s * std::log(8.0)) * (hurwitz_zeta(s, 0.125) - hurwitz_zeta(s, 0.625));
}

// B(s) = sum_{n>=1} (-1)^{n+1} (4n-1)^{-s}
inline double glasser_B(double s) {
    return std::exp(-s * std::log(8.0)) * (hurwitz_zeta(s, 0.375) - hurwitz_zeta(s, 0.875));
}

}  // namespace latticezeta
