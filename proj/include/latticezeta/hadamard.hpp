#pragma once

// The singular part of the Hadamard integral over [0, c]: power-series
// coefficients of psi on the circle |t| = c give
//   =int_0^c t^{nu-d-1} psi(t) dt = c^{nu-d} sum_j a_j / (nu - d + j),
// plus the smooth tail over [c, 1/lambda] by adaptive quadrature.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "latticezeta/errors.hpp"
#include "latticezeta/lattice.hpp"
#include "latticezeta/quadrature.hpp"

namespace latticezeta {

struct FinitePartPlan {
    double c = 0.0;       // contour radius / split point
    int m = 32;           // power-series coefficients requested
    double lambda = 0.0;  // Riemann splitting parameter
    std::array<bool, kMaxDim> gamma{};
    double H1 = 0.0;      // sqrt(sigma_d / pi)
    double Hbar = 0.0;    // sqrt(sigma_1 log(1/eps) / pi)
    bool cond_branch = true, cond_mask = true, cond_decay = true;
};

// Largest admissible contour radius c <= 1/lambda:
//   (i)  |w_j|/c - c |(A^T x)_j| >= Hbar   for unmasked coordinates,
//   (ii) c |(A^T x)_j| <= H1               for masked coordinates,
//   (iii) c <= 1/(|x| sqrt(pi)).
// w is A^T y reduced to [-1/2, 1/2)^d; the mask marks w_j = 0.
inline FinitePartPlan choose_c(const LatticeBasis& basis, const Vec& x, const Vec& w_reduced,
                               const std::array<bool, kMaxDim>& gamma, double lambda,
                               double eps) {
    FinitePartPlan plan;
    plan.lambda = lambda;
    plan.gamma = gamma;
    plan.H1 = std::sqrt(basis.sigma_min() / M_PI);
    plan.Hbar = std::sqrt(basis.sigma_max() * (-std::log(eps)) / M_PI);

    double c = 1.0 / lambda;
    Vec atx = matTvec(basis.A, x);
    double xn = x.norm();
    if (xn > 0.0) c = std::min(c, 1.0 / (xn * std::sqrt(M_PI)));
    for (int j = 0; j < basis.d; ++j) {
        double axj = std::abs(atx[j]);
        if (gamma[j]) {
            if (axj > 0.0) c = std::min(c, plan.H1 / axj);
        } else {
            double wj = std::abs(w_reduced[j]);
            // |w|/c - c|ax| = Hbar  =>  |ax| c^2 + Hbar c - |w| = 0
            double cj;
            if (axj > 0.0)
                cj = (-plan.Hbar + std::sqrt(plan.Hbar * plan.Hbar + 4.0 * axj * wj)) /
                     (2.0 * axj);
            else
                cj = wj / plan.Hbar;
            c = std::min(c, cj);
        }
    }
    if (!(c > 0.0))
        throw NoFeasibleC("wave vector too close to the singular support off the mask");
    plan.c = c;

    // record the three conditions for diagnostics
    plan.cond_decay = (xn == 0.0) || (c <= 1.0 / (xn * std::sqrt(M_PI)) + 1e-15);
    plan.cond_mask = true;
    plan.cond_branch = true;
    for (int j = 0; j < basis.d; ++j) {
        double axj = std::abs(atx[j]);
        if (gamma[j]) {
            if (c * axj > plan.H1 * (1.0 + 1e-12)) plan.cond_mask = false;
        } else {
            if (std::abs(w_reduced[j]) / c - c * axj < plan.Hbar * (1.0 - 1e-12))
                plan.cond_branch = false;
        }
    }
    return plan;
}

// Power-series coefficients a_j of psi(t) about t = 0 sampled on |t| = c,
// doubling m until the trailing coefficients are negligible. The node cache
// persists across doublings (even-indexed nodes are reused).
template <class PsiFn>
std::vector<std::complex<double>> contour_coefficients(PsiFn&& psi_at, double c, int m0,
                                                       double eps, double noise_abs = 0.0,
                                                       int m_max = 256) {
    using cplx = std::complex<double>;
    std::vector<cplx> cache;  // values at angles 2 pi k / m_current
    int m = m0;
    cache.resize(m);
    for (int k = 0; k < m; ++k)
        cache[k] = psi_at(std::polar(c, 2.0 * M_PI * k / m));
    for (;;) {
        std::vector<cplx> a(m);
        for (int j = 0; j < m; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < m; ++k)
                s += cache[k] * std::polar(1.0, -2.0 * M_PI * double(j) * k / m);
            a[j] = s / static_cast<double>(m);
        }
        double amax = 0.0;
        for (const cplx& v : a) amax = std::max(amax, std::abs(v));
        double tail = std::max({std::abs(a[m - 1]), std::abs(a[m - 2]), std::abs(a[m - 3])});
        // the samples carry the psi evaluator's own noise; coefficients
        // cannot decay below it
        if (tail <= std::max(eps * amax, noise_abs) || amax == 0.0) return a;
        if (m >= m_max)
            throw SeriesNotConverged("contour coefficients still large at m = " +
                                     std::to_string(m));
        // double the node count, reusing the existing values
        std::vector<cplx> next(2 * m);
        for (int k = 0; k < m; ++k) next[2 * k] = cache[k];
        for (int k = 0; k < m; ++k)
            next[2 * k + 1] = psi_at(std::polar(c, 2.0 * M_PI * (2.0 * k + 1) / (2 * m)));
        cache = std::move(next);
        m *= 2;
    }
}

// c^{nu-d} sum_j a_j / (nu - d + j); simple poles of the continuation sit at
// nu = d - j.
inline std::complex<double> finite_part_value(double nu, int d, double c,
                                              const std::vector<std::complex<double>>& coeff,
                                              double pole_tol = 1e-8) {
    std::complex<double> s = 0.0;
    for (int j = static_cast<int>(coeff.size()) - 1; j >= 0; --j) {
        double den = nu - d + j;
        if (std::abs(den) < pole_tol)
            throw PoleError("nu = " + std::to_string(nu) + " lies on a continuation pole (d-" +
                            std::to_string(j) + ")");
        s += coeff[j] / den;
    }
    return std::pow(c, nu - d) * s;
}

// Assembled finite part: series evaluation of the contour coefficients.
template <class PsiContour>
std::complex<double> finite_part_series(double nu, int d, double c, PsiContour&& psi_at, int m,
                                        double eps) {
    auto coeff = contour_coefficients(psi_at, c, m, eps);
    return finite_part_value(nu, d, c, coeff);
}

// Smooth remainder int_c^{1/lambda} t^{nu-d-1} psi(t) dt.
template <class PsiReal>
std::complex<double> tail_integral(double nu, int d, double c, double lambda, PsiReal&& psi_real,
                                   double tol, double tol_rel = 4e-12) {
    double hi = 1.0 / lambda;
    if (c >= hi) return 0.0;
    auto f = [&](double t) { return std::pow(t, nu - d - 1.0) * psi_real(t); };
    return adaptive_integrate(f, c, hi, tol, tol_rel, 40000).value;
}

}  // namespace latticezeta
