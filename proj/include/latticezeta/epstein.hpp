#pragma once

// Classical Epstein zeta for full lattices by Crandall's formula: a
// superexponentially convergent direct-space sum plus its reciprocal-space
// counterpart, split at the Riemann parameter lambda.

#include <cmath>
#include <complex>

#include "latticezeta/lattice.hpp"
#include "latticezeta/special.hpp"

namespace latticezeta {

struct EpsteinOptions {
    double eps = 1e-14;
    double lambda = 0.0;  // 0: use V^{1/d}
};

// Z_{Lambda,nu} | x; y | = sum'_{z in Lambda} e^{-2 pi i y.z} / |z-x|^nu,
// meromorphically continued; nu = d excluded. At nu in -2N0 the inverse
// gamma prefactor annihilates everything except the limit of the excluded
// point's kernel, which is handled explicitly.
inline std::complex<double> epstein_zeta(const LatticeBasis& basis, double nu, const Vec& x,
                                         const Vec& y, EpsteinOptions opt = {}) {
    using cplx = std::complex<double>;
    const int d = basis.d;
    if (std::abs(nu - d) < 1e-12) throw PoleError("Epstein zeta has its pole at nu = d");

    const double eps = std::max(opt.eps, 1e-15);
    const double lambda = opt.lambda > 0.0 ? opt.lambda : std::pow(basis.volume, 1.0 / d);
    const double logeps = -std::log(eps);
    const double rad = lambda * std::sqrt(logeps / M_PI);

    // half-integer negative nu: 1/Gamma(nu/2) = 0 kills all regular terms
    bool gamma_pole = (nu <= 0.0 && std::abs(nu / 2.0 - std::round(nu / 2.0)) < 1e-12);

    // the excluded-point term survives the prefactor zero only at nu = 0
    Vec ux = matvec(basis.Ainv, x);
    bool x_on_lattice = true;
    for (int j = 0; j < d; ++j)
        if (std::abs(ux[j] - std::round(ux[j])) > 1e-12) x_on_lattice = false;
    if (gamma_pole) {
        if (std::abs(nu) < 1e-12 && x_on_lattice)
            return -std::exp(cplx(0.0, -2.0 * M_PI * dot(y, x)));
        return 0.0;
    }

    const cplx pref = std::pow(M_PI, 0.5 * nu) * std::pow(lambda, -nu) /
                      std::tgamma(0.5 * nu);

    // direct space: z in Lambda with |z - x| <= rad
    cplx direct = 0.0;
    {
        double reach = rad / std::sqrt(basis.sigma_min());
        std::array<long long, kMaxDim> lo{}, hi{};
        for (int j = 0; j < d; ++j) {
            lo[j] = static_cast<long long>(std::floor(ux[j] - reach)) - 1;
            hi[j] = static_cast<long long>(std::ceil(ux[j] + reach)) + 1;
        }
        std::array<long long, kMaxDim> n = lo;
        for (;;) {
            Vec nv(d);
            for (int j = 0; j < d; ++j) nv[j] = static_cast<double>(n[j]);
            Vec z = matvec(basis.A, nv);
            double r2 = (z - x).norm2();
            double u = M_PI * r2 / (lambda * lambda);
            if (u < logeps + 30.0) {
                double g = (r2 < 1e-20 * lambda * lambda) ? -2.0 / nu : g_function_u(nu, u);
                direct += g * std::exp(cplx(0.0, -2.0 * M_PI * dot(y, z)));
            }
            int j = 0;
            while (j < d && ++n[j] > hi[j]) n[j++] = lo[j];
            if (j == d) break;
        }
    }

    // reciprocal space: k in Lambda* with |y - k| <= sqrt(log/pi)/lambda
    cplx recip = 0.0;
    {
        double rrad = std::sqrt(logeps / M_PI) / lambda;
        Vec aty = matTvec(basis.A, y);
        double reach = rrad * std::sqrt(basis.sigma_max());
        std::array<long long, kMaxDim> lo{}, hi{};
        for (int j = 0; j < d; ++j) {
            lo[j] = static_cast<long long>(std::floor(aty[j] - reach)) - 1;
            hi[j] = static_cast<long long>(std::ceil(aty[j] + reach)) + 1;
        }
        Mat AinvT = basis.Ainv.transposed();
        std::array<long long, kMaxDim> n = lo;
        for (;;) {
            Vec nv(d);
            for (int j = 0; j < d; ++j) nv[j] = static_cast<double>(n[j]);
            Vec k = matvec(AinvT, nv);
            Vec yk = y - k;
            double u = M_PI * lambda * lambda * yk.norm2();
            if (u < logeps + 30.0) {
                double g = (u < 1e-24) ? -2.0 / (d - nu) : g_function_u(d - nu, u);
                recip += g * std::exp(cplx(0.0, -2.0 * M_PI * dot(x, yk)));
            }
            int j = 0;
            while (j < d && ++n[j] > hi[j]) n[j++] = lo[j];
            if (j == d) break;
        }
        recip *= std::pow(lambda, d) / basis.volume;
    }

    return pref * (direct + recip);
}

}  // namespace latticezeta
