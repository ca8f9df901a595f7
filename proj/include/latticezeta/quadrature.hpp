#pragma once

// Gauss-Legendre rules of order 16 and 30 plus a bisection-based adaptive
// driver. The per-interval error estimate is the difference between the two
// rules; an interval is accepted once that difference falls below its share
// of the absolute budget or below the relative tolerance.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>
#include <cstdio>

#include "latticezeta/errors.hpp"

namespace latticezeta {

struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

namespace detail {

inline QuadratureRule make_gauss_legendre(int n) {
    QuadratureRule r;
    r.order = n;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n, Tricomi-style initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-17) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

}  // namespace detail

inline const QuadratureRule& gauss_legendre_16() {
    static const QuadratureRule r = detail::make_gauss_legendre(16);
    return r;
}

inline const QuadratureRule& gauss_legendre_30() {
    static const QuadratureRule r = detail::make_gauss_legendre(30);
    return r;
}

template <class F>
std::complex<double> fixed_quadrature(const QuadratureRule& rule, F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> s = 0;
    for (int i = 0; i < rule.order; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * s;
}

struct IntegrateResult {
    std::complex<double> value;
    double err;
    int intervals;
};

// Integrates f over [a, b]. Accepts once the estimated error is below
// tol_abs (distributed over subintervals by length) or below tol_rel
// relative to the local value. Interval budget per the engine contract.
template <class F>
IntegrateResult adaptive_integrate(F&& f, double a, double b, double tol_abs,
                                   double tol_rel = 0.0, int budget = 10000) {
    IntegrateResult res{0.0, 0.0, 0};
    if (a == b) return res;

    struct Seg {
        double a, b;
        std::complex<double> i30;
        double err;
    };
    const QuadratureRule& lo = gauss_legendre_16();
    const QuadratureRule& hi = gauss_legendre_30();
    const double total = std::abs(b - a);

    auto eval_seg = [&](double sa, double sb) {
        Seg s{sa, sb, 0.0, 0.0};
        std::complex<double> i16 = fixed_quadrature(lo, f, sa, sb);
        s.i30 = fixed_quadrature(hi, f, sa, sb);
        s.err = std::abs(s.i30 - i16);
        return s;
    };

    std::vector<Seg> stack;
    stack.push_back(eval_seg(a, b));
    res.intervals = 1;
    double density = std::abs(stack.back().i30) / total;  // largest local magnitude seen

    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double len = std::abs(s.b - s.a);
        density = std::max(density, std::abs(s.i30) / len);
        double allow = tol_abs * (len / total);
        // machine floor: never demand more than the integrand's own scale admits
        allow = std::max(allow, 2e-15 * density * len);
        if (s.err <= allow || s.err <= tol_rel * std::abs(s.i30) || len < 1e-15 * total) {
            res.value += s.i30;
            res.err += s.err;
            continue;
        }
        if (res.intervals + 2 > budget) {
            // best estimate: fold in everything left on the stack
            res.value += s.i30;
            res.err += s.err;
            for (const Seg& t : stack) {
                res.value += t.i30;
                res.err += t.err;
            }
#ifdef LZ_QUAD_DEBUG
            std::fprintf(stderr, "budget: [%g,%g] tol_abs=%g tol_rel=%g val=%g err=%g\n", a, b,
                         tol_abs, tol_rel, std::abs(res.value), res.err);
#endif
            throw BudgetExceeded(res.value, res.err);
        }
        double mid = 0.5 * (s.a + s.b);
        stack.push_back(eval_seg(s.a, mid));
        stack.push_back(eval_seg(mid, s.b));
        res.intervals += 2;
    }
    return res;
}

}  // namespace latticezeta
