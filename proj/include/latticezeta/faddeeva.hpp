#pragma once

// Classical Faddeeva function w(z) = e^{-z^2} erfc(-iz).
//
// Upper half plane: a pole-corrected midpoint rule on the defining integral
// (nodes t_k = (k+1/2)h, correction 2 e^{-z^2} E/(1+E) with E = e^{2 pi i z/h})
// for moderate |z|, and the Laplace continued fraction far out. Lower half
// plane via w(z) = 2 e^{-z^2} - w(-z).

#include <cmath>
#include <complex>

namespace latticezeta {

namespace detail {

inline std::complex<double> faddeeva_cf(std::complex<double> z) {
    // w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
    const std::complex<double> tiny(1e-280, 0.0);
    std::complex<double> f = z, c = z, d = 0.0;
    for (int n = 1; n <= 300; ++n) {
        double an = -0.5 * n;
        d = z + an * d;
        if (std::norm(d) < 1e-280) d = tiny;
        c = z + an / c;
        if (std::norm(c) < 1e-280) c = tiny;
        d = 1.0 / d;
        std::complex<double> del = c * d;
        f *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-17) break;
    }
    return std::complex<double>(0.0, 0.5641895835477562869) / f;
}

inline std::complex<double> faddeeva_midpoint(std::complex<double> z) {
    const double x = std::abs(z.real()), y = z.imag();
    double h = std::min(0.42, M_PI / (y + 2.5));
    // keep the midpoint nodes away from Re z when z sits near the real axis
    if (y < 0.1 * h) {
        static const double scales[5] = {1.0, 1.055, 0.93, 1.11, 0.87};
        double best = -1.0;
        for (double s : scales) {
            double hs = h * s;
            double u = x / hs - std::floor(x / hs);  // distance within cell; nodes at 0.5
            double dist = std::abs(u - 0.5);
            if (dist > best) {
                best = dist;
                if (dist > 0.25) {
                    h = hs;
                    break;
                }
                h = hs;
            }
        }
    }
    std::complex<double> z2 = z * z;
    std::complex<double> sum = 0.0;
    const int nterm = static_cast<int>(std::ceil(7.2 / h));
    for (int k = 0; k < nterm; ++k) {
        double t = (k + 0.5) * h;
        sum += std::exp(-t * t) / (z2 - t * t);
    }
    std::complex<double> val = std::complex<double>(0.0, 2.0 * h / M_PI) * z * sum;
    // pole correction, written with |E| <= 1 in the upper half plane
    std::complex<double> E = std::exp(std::complex<double>(0.0, 2.0 * M_PI / h) * z);
    val += 2.0 * std::exp(-z2) * E / (1.0 + E);
    return val;
}

}  // namespace detail

inline std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() < 0.0) {
        // w(z) + w(-z) = 2 e^{-z^2}
        return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
    }
    if (std::abs(z.real()) + z.imag() >= 6.5) return detail::faddeeva_cf(z);
    return detail::faddeeva_midpoint(z);
}

// erfc on the real line through w: erfc(x) = e^{-x^2} w(ix).
inline double erfc_via_w(double x) {
    if (x >= 0.0) return std::exp(-x * x) * faddeeva_w(std::complex<double>(0.0, x)).real();
    return 2.0 - erfc_via_w(-x);
}

}  // namespace latticezeta
