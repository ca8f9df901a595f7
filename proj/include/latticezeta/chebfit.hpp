#pragma once

// Monomial expansion of an analytic function on [center-delta, center+delta]
// from Chebyshev samples (Newton divided differences expanded to monomials,
// which is the backward-stable route at this degree), plus the analytic
// Cauchy moments that integrate such expansions against 1/(xi - z -+ i0).

#include <cmath>
#include <complex>
#include <vector>

#include "latticezeta/errors.hpp"

namespace latticezeta {

struct MonomialFit {
    double center = 0.0;
    double halfwidth = 0.0;
    // coefficients in the scaled variable u = (x - center)/halfwidth
    std::vector<std::complex<double>> coeff;

    std::complex<double> eval(double x) const {
        double u = (x - center) / halfwidth;
        std::complex<double> s = 0.0;
        for (int n = static_cast<int>(coeff.size()) - 1; n >= 0; --n) s = s * u + coeff[n];
        return s;
    }
};

// Fits f on [center-delta, center+delta] with an N-th order monomial
// expansion; verifies the fit at 2N intermediate points.
template <class F>
MonomialFit chebyshev_monomial_fit(F&& f, double center, double delta, int N = 20,
                                   double resid_tol = 1e-11) {
    using cplx = std::complex<double>;
    MonomialFit fit;
    fit.center = center;
    fit.halfwidth = delta;

    std::vector<double> u(N + 1);
    std::vector<cplx> val(N + 1);
    double fscale = 0.0;
    for (int i = 0; i <= N; ++i) {
        u[i] = std::cos(M_PI * i / N);
        val[i] = f(center + delta * u[i]);
        fscale = std::max(fscale, std::abs(val[i]));
    }
    if (fscale == 0.0) {
        fit.coeff.assign(N + 1, 0.0);
        return fit;
    }

    // Chebyshev interpolation coefficients on the extrema grid
    std::vector<cplx> cheb(N + 1);
    for (int k = 0; k <= N; ++k) {
        cplx s = 0.5 * (val[0] + (k % 2 ? -1.0 : 1.0) * val[N]);
        for (int i = 1; i < N; ++i) s += val[i] * std::cos(M_PI * i * k / N);
        cheb[k] = s * (2.0 / N);
    }
    cheb[0] *= 0.5;
    cheb[N] *= 0.5;

    // coefficients at roundoff level only feed conversion noise
    double cmax = 0.0;
    for (const cplx& ck : cheb) cmax = std::max(cmax, std::abs(ck));
    for (cplx& ck : cheb)
        if (std::abs(ck) < 1e-14 * cmax) ck = 0.0;

    // convert to monomials with the T_{k+1} = 2u T_k - T_{k-1} recurrence;
    // the decay of cheb[k] keeps the conversion benign at this degree
    std::vector<cplx> c(N + 1, 0.0);
    std::vector<double> tkm1(N + 1, 0.0), tk(N + 1, 0.0), tmp(N + 1);
    tkm1[0] = 1.0;  // T_0
    if (N >= 1) tk[1] = 1.0;  // T_1
    c[0] += cheb[0];
    if (N >= 1) c[1] += cheb[1];
    for (int k = 2; k <= N; ++k) {
        for (int j = 0; j <= N; ++j) tmp[j] = (j ? 2.0 * tk[j - 1] : 0.0) - tkm1[j];
        for (int j = 0; j <= k; ++j) c[j] += cheb[k] * tmp[j];
        tkm1 = tk;
        tk = tmp;
    }
    fit.coeff = std::move(c);

    double resid = 0.0;
    for (int i = 0; i < 2 * N; ++i) {
        double ut = std::cos(M_PI * (i + 0.5) / (2.0 * N));
        double x = center + delta * ut;
        resid = std::max(resid, std::abs(fit.eval(x) - f(x)));
    }
    if (resid > resid_tol * fscale)
        throw FitFailed("residual " + std::to_string(resid / fscale));
    return fit;
}

enum class CauchySide { Plus, Minus };  // i0+ / i0-

// p_n = int_a^b (xi - center)^n / (xi - z -+ i0) dxi for n = 0..N.
// For complex z the actual half-plane fixes the branch; the side flag decides
// it when z is exactly on the real axis.
inline std::vector<std::complex<double>> cauchy_moments(double a, double b, double center,
                                                        std::complex<double> z, int N,
                                                        CauchySide side = CauchySide::Plus) {
    using cplx = std::complex<double>;
    std::vector<cplx> p(N + 1);
    cplx p0;
    if (z.imag() != 0.0) {
        p0 = std::log((b - z) / (a - z));
    } else {
        double zr = z.real();
        double num = std::abs(b - zr), den = std::abs(a - zr);
        p0 = std::log(num / den);
        if (zr > a && zr < b) p0 += cplx(0.0, side == CauchySide::Plus ? M_PI : -M_PI);
    }
    p[0] = p0;
    double bc = b - center, ac = a - center;
    double bp = 1.0, ap = 1.0;
    cplx zc = z - center;
    for (int n = 1; n <= N; ++n) {
        bp *= bc;
        ap *= ac;
        p[n] = (bp - ap) / static_cast<double>(n) + zc * p[n - 1];
    }
    return p;
}

}  // namespace latticezeta
