#pragma once

// Scalar kernels: upper incomplete gamma for real order (including negative),
// and the incomplete-gamma kernel G_nu(z) = Gamma(nu/2, pi z^2) / (pi z^2)^(nu/2)
// with G_nu(0) = -2/nu.

#include <cmath>
#include <limits>

#include "latticezeta/errors.hpp"
#include "latticezeta/linalg.hpp"

namespace latticezeta {

namespace detail {

// Continued fraction for Gamma(a,x) * x^(-a) * e^(x), modified Lentz.
// Reliable for x >= a+1 (and generally x not small).
inline double gamma_upper_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-17) break;
    }
    return h;  // Gamma(a,x) = e^{-x} x^a h
}

// Gamma(a,x) * x^(-a) for a in [-0.25, 0.25], x in (0, 1.2).
// Splits off the 1/a singularity analytically so a -> 0 is exact.
inline double gamma_upper_scaled_small_a(double a, double x) {
    double t = std::lgamma(1.0 + a) - a * std::log(x);
    double lead;
    if (std::abs(a) > 1e-12)
        lead = std::expm1(t) / a;
    else
        lead = -0.5772156649015328606 - std::log(x);
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 60; ++n) {
        term *= -x / n;
        double add = term / (a + n);
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return lead - sum;
}

}  // namespace detail

// Gamma(a,x) * x^(-a); the natural scaling for the kernel G_nu.
inline double gamma_upper_scaled(double a, double x) {
    if (!(x > 0)) throw DomainError("upper incomplete gamma needs x > 0");
    if (a < -0.25) {
        // downward recurrence in the scaled variable:
        // S(a) = (x S(a+1) - e^{-x}) / a
        int k = static_cast<int>(std::ceil(-0.25 - a));
        double a0 = a + k;
        double s = gamma_upper_scaled(a0, x);
        double emx = std::exp(-x);
        for (int j = 0; j < k; ++j) {
            a0 -= 1.0;
            s = (x * s - emx) / a0;
        }
        return s;
    }
    if (x >= a + 1.0) return std::exp(-x) * detail::gamma_upper_cf(a, x);
    if (a <= 0.25) return detail::gamma_upper_scaled_small_a(a, x);
    // series for the lower incomplete gamma, x < a+1
    double ap = a, del = 1.0 / a, sum = del;
    for (int n = 0; n < 300; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < 1e-17 * std::abs(sum)) break;
    }
    // gamma(a,x) = x^a e^{-x} sum;  Gamma(a,x) x^{-a} = Gamma(a) x^{-a} - e^{-x} sum
    return std::tgamma(a) * std::exp(-a * std::log(x)) - std::exp(-x) * sum;
}

inline double upper_incomplete_gamma(double a, double x) {
    return gamma_upper_scaled(a, x) * std::exp(a * std::log(x));
}

// G_nu as a function of u = pi * |z|^2.
inline double g_function_u(double nu, double u) {
    if (u == 0.0) {
        if (nu == 0.0) throw DomainError("G_0(0) undefined");
        return -2.0 / nu;
    }
    return gamma_upper_scaled(0.5 * nu, u);
}

inline double g_function(double nu, const Vec& z) { return g_function_u(nu, M_PI * z.norm2()); }

}  // namespace latticezeta
