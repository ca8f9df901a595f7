#pragma once

// End-to-end assembly of set zeta functions: lambda selection, the
// superexponentially convergent direct-space sum, the Hadamard finite part
// with its smooth tail, pole handling, geometry-level recombination, and the
// naive-summation oracle.

#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "latticezeta/epstein.hpp"
#include "latticezeta/geometry.hpp"
#include "latticezeta/hadamard.hpp"
#include "latticezeta/psi.hpp"
#include "latticezeta/special.hpp"

namespace latticezeta {

// lambda = max( (2/h) sqrt(sigma_1 log(1/eps)/pi) with h = 1/2,
//               sqrt(pi sigma_d (A^{-1}x)^2 / log(1/eps)) )
inline double choose_lambda(const LatticeBasis& basis, const Vec& x, double eps) {
    double L = -std::log(eps);
    double lam1 = 4.0 * std::sqrt(basis.sigma_max() * L / M_PI);
    double u2 = matvec(basis.Ainv, x).norm2();
    double lam2 = std::sqrt(M_PI * basis.sigma_min() * u2 / L);
    return std::max(lam1, lam2);
}

struct CornerDiagnostics {
    double lambda = 0.0;
    double c = 0.0;
    int contour_m = 0;
    long long real_terms = 0;
    double seconds = 0.0;
};

// Per-corner evaluator. Everything nu-independent (contour coefficients,
// direct-space point list, tail psi values) is cached, so nu sweeps on a
// fixed configuration cost little beyond incomplete-gamma evaluations.
class CornerZeta {
  public:
    CornerZeta(const CornerSpec& corner, const Vec& y, double eps)
        : corner_(corner),
          d_(corner.basis.d),
          eps_(eps),
          psi_(corner.basis, corner.offset, y, make_psi_options(eps)) {
        lambda_ = choose_lambda(corner_.basis, corner_.offset, eps_);
        plan_ = choose_c(corner_.basis, corner_.offset, psi_.reduced_wave(), psi_.gamma_mask(),
                         lambda_, eps_ * 1e-2);
        diag_.lambda = lambda_;
        diag_.c = plan_.c;
    }

    // rejects wave vectors in the ambiguous band next to the singular support
    static void check_wave_vector(const LatticeBasis& basis, const Vec& y) {
        Vec w = matTvec(basis.A, y);
        for (int j = 0; j < basis.d; ++j) {
            double r = std::abs(w[j] - std::round(w[j]));
            if (r > 1e-12 && r < 1e-10)
                throw SingularWaveVector("component " + std::to_string(j) +
                                         " of A^T y is integral within 1e-10");
        }
    }

    // Z_{L,nu}(y) for the corner set L = A N0^d - x (sign not applied)
    std::complex<double> eval(double nu) {
        using cplx = std::complex<double>;
        auto t0 = std::chrono::steady_clock::now();

        bool gamma_pole = (nu <= 0.0 && std::abs(nu / 2.0 - std::round(nu / 2.0)) < 1e-12);
        cplx value;
        if (gamma_pole) {
            // 1/Gamma(nu/2) vanishes; only the resonant series term survives
            int m0 = static_cast<int>(std::llround(-nu / 2.0));
            int j0 = d_ + 2 * m0;
            ensure_coefficients(j0 + 8);
            double fact = 1.0;
            for (int i = 2; i <= m0; ++i) fact *= i;
            double sgn = (m0 % 2 == 0) ? 1.0 : -1.0;
            cplx a_j0 = (j0 < static_cast<int>(coeff_.size())) ? coeff_[j0] : cplx(0.0);
            value = std::pow(M_PI, 0.5 * nu) * std::pow(plan_.c, nu - d_) * a_j0 * sgn * fact;
        } else {
            ensure_coefficients(0);
            ensure_real_terms();
            cplx sr = 0.0;
            for (const RTerm& rt : rterms_) {
                double g = rt.excluded ? -2.0 / nu : g_function_u(nu, rt.u);
                sr += rt.phase * g;
            }
            sr *= rphase_;
            cplx ffp = finite_part_value(nu, d_, plan_.c, coeff_);
            double scale = std::abs(ffp) + 1.0;
            cplx ftail = tail_integral(nu, d_, plan_.c, lambda_,
                                       [&](double t) { return psi_memo(t); },
                                       0.02 * eps_ * scale);
            value = std::pow(M_PI, 0.5 * nu) / std::tgamma(0.5 * nu) *
                    (std::pow(lambda_, -nu) * sr + 2.0 * (ffp + ftail));
        }
        value *= psi_.wave_reduction_phase();
        diag_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();
        return value;
    }

    const CornerDiagnostics& diagnostics() const { return diag_; }
    const FinitePartPlan& plan() const { return plan_; }
    double lambda() const { return lambda_; }

  private:
    static PsiOptions make_psi_options(double eps) {
        PsiOptions o;
        o.eps = std::max(eps * 3e-2, 1e-15);
        return o;
    }

    void ensure_coefficients(int min_terms) {
        if (!coeff_.empty() && static_cast<int>(coeff_.size()) >= min_terms) return;
        int m0 = 32;
        while (m0 < min_terms + 8) m0 *= 2;
        double noise = 3.0 * make_psi_options(eps_).eps;
        coeff_ = contour_coefficients(
            [&](std::complex<double> t) { return psi_.psi_reduced(t, true); }, plan_.c, m0,
            eps_ * 1e-2, noise);
        diag_.contour_m = static_cast<int>(coeff_.size());
    }

    void ensure_real_terms() {
        if (rterms_ready_) return;
        rterms_ready_ = true;
        const LatticeBasis& b = corner_.basis;
        const Vec& w = psi_.reduced_wave();
        Vec u = matvec(b.Ainv, corner_.offset);
        double L = -std::log(eps_ * 1e-2);
        double rad = lambda_ * std::sqrt(L / M_PI);
        double reach = rad / std::sqrt(b.sigma_min());
        std::array<long long, kMaxDim> lo{}, hi{};
        for (int j = 0; j < d_; ++j) {
            lo[j] = 0;
            hi[j] = static_cast<long long>(std::floor(u[j] + reach)) + 1;
            if (hi[j] < 0) return;  // empty sum, offset far from the corner hull
        }
        // constant front phase e^{2 pi i w.u}
        rphase_ = std::exp(std::complex<double>(0.0, 2.0 * M_PI * dot(w, u)));
        std::array<long long, kMaxDim> n = lo;
        for (;;) {
            Vec nv(d_);
            for (int j = 0; j < d_; ++j) nv[j] = static_cast<double>(n[j]);
            Vec z = matvec(b.A, nv) - corner_.offset;
            double uu = M_PI * z.norm2() / (lambda_ * lambda_);
            if (uu < L + 30.0) {
                RTerm rt;
                rt.u = uu;
                rt.excluded = (uu < 1e-18);
                rt.phase = std::exp(std::complex<double>(0.0, -2.0 * M_PI * dot(w, nv)));
                rterms_.push_back(rt);
            }
            int j = 0;
            while (j < d_ && ++n[j] > hi[j]) n[j++] = lo[j];
            if (j == d_) break;
        }
        diag_.real_terms = static_cast<long long>(rterms_.size());
    }

    std::complex<double> psi_memo(double t) {
        long long key = std::bit_cast<long long>(t);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::complex<double> v = psi_.psi_reduced(t, false);
        memo_.emplace(key, v);
        return v;
    }

    struct RTerm {
        double u;
        bool excluded;
        std::complex<double> phase;
    };

    CornerSpec corner_;
    int d_;
    double eps_;
    PsiCornerEvaluator psi_;
    double lambda_ = 0.0;
    FinitePartPlan plan_;
    std::vector<std::complex<double>> coeff_;
    std::vector<RTerm> rterms_;
    std::complex<double> rphase_ = 1.0;
    bool rterms_ready_ = false;
    std::unordered_map<long long, std::complex<double>> memo_;
    CornerDiagnostics diag_;
};

struct ZetaQuery {
    GeometrySpec geometry;
    double nu = 0.0;
    Vec x;  // shift / primed-exclusion point
    Vec y;  // wave vector
    double eps = 1e-12;
};

struct ZetaResult {
    std::complex<double> value;
    double err_estimate = 0.0;
    std::vector<CornerDiagnostics> corners;
};

// Rejects nu within tolerance of the continuation pole set (d - N0) \ (-2 N0).
inline void check_pole_set(double nu, int d, double tol = 1e-8) {
    if (nu > d + tol) return;
    double j = d - nu;  // distance index into the pole ladder
    double jr = std::round(j);
    if (jr < -0.5) return;
    if (std::abs(j - jr) < tol) {
        double at = d - jr;
        bool gamma_zero = (at <= 0.0 && std::abs(at / 2.0 - std::round(at / 2.0)) < 1e-9);
        if (!gamma_zero)
            throw PoleError("nu = " + std::to_string(at) +
                            " is a simple pole of the continuation");
    }
}

// Geometry-level evaluator: decomposes everything into valid corners once,
// then evaluates Z_{L,nu}|x; y| = e^{-2 pi i y.x} sum_i sign_i Z_i(nu).
class GeometryEvaluator {
  public:
    GeometryEvaluator(const GeometrySpec& g, const Vec& x, const Vec& y, double eps = 1e-12)
        : eps_(eps) {
        if (eps < 1e-15 || eps > 1e-4) throw DomainError("eps must lie in [1e-15, 1e-4]");
        d_ = g.terms.empty() ? x.n : g.terms.front().dimension();
        infinite_ = !g.all_finite();
        global_phase_ = std::exp(std::complex<double>(0.0, -2.0 * M_PI * dot(y, x)));
        std::vector<CornerSpec> raw;
        for (const GeometryTerm& term : g.terms) {
            if (term.is_corner) {
                CornerSpec c = term.corner;
                c.sign *= term.coeff;
                c.offset = c.offset + x;
                raw.push_back(std::move(c));
            } else {
                for (CornerSpec c : decompose_parallelepiped(term.piped)) {
                    c.sign *= term.coeff;
                    c.offset = c.offset + x;
                    raw.push_back(std::move(c));
                }
            }
        }
        for (const CornerSpec& c : raw) {
            for (CornerSpec& v : normalize_corner_offset(c, /*strict=*/false)) {
                CornerZeta::check_wave_vector(v.basis, y);
                terms_.push_back(Term{v.sign, v.phase,
                                      std::make_unique<CornerZeta>(v, y, eps_)});
            }
        }
    }

    ZetaResult eval(double nu) {
        check_pole_set(nu, d_);
        ZetaResult res;
        std::complex<double> acc = 0.0;
        double magsum = 0.0;
        for (Term& t : terms_) {
            std::complex<double> v = static_cast<double>(t.sign) * t.phase * t.ev->eval(nu);
            acc += v;
            magsum += std::abs(v);
            res.corners.push_back(t.ev->diagnostics());
        }
        res.value = global_phase_ * acc;
        res.err_estimate = 10.0 * eps_ * std::max(magsum, std::abs(acc));
        return res;
    }

    std::size_t corner_count() const { return terms_.size(); }

  private:
    struct Term {
        int sign;
        std::complex<double> phase;
        std::unique_ptr<CornerZeta> ev;
    };
    double eps_;
    int d_ = 0;
    bool infinite_ = false;
    std::complex<double> global_phase_;
    std::vector<Term> terms_;
};

inline ZetaResult set_zeta(const ZetaQuery& q) {
    if (q.geometry.terms.empty()) return ZetaResult{0.0, 0.0, {}};
    GeometryEvaluator ev(q.geometry, q.x, q.y, q.eps);
    return ev.eval(q.nu);
}

// One-shot corner evaluation in the Epstein convention.
inline std::complex<double> corner_zeta(const CornerSpec& corner, double nu, const Vec& y,
                                        double eps = 1e-12) {
    GeometrySpec g = GeometrySpec::single(corner);
    ZetaQuery q;
    q.geometry = g;
    q.nu = nu;
    q.x = Vec(corner.basis.d);
    q.y = y;
    q.eps = eps;
    return set_zeta(q).value;
}

struct NaiveOptions {
    double tol = 1e-12;
    long long budget = 200000000;  // max enumerated points
    double corner_radius = 0.0;    // truncation radius for infinite corners
};

struct NaiveResult {
    std::complex<double> value;
    double tail_bound = 0.0;
    long double points = 0.0L;
};

namespace detail {

template <class Body>
void enumerate_box(int d, const std::array<std::int64_t, kMaxDim>& counts, Body&& body) {
    std::array<std::int64_t, kMaxDim> n{};
    for (int j = 0; j < d; ++j)
        if (counts[j] <= 0) return;
    for (;;) {
        body(n);
        int j = 0;
        while (j < d && ++n[j] >= counts[j]) n[j++] = 0;
        if (j == d) break;
    }
}

}  // namespace detail

// Direct summation with compensated accumulation and the primed exclusion;
// infinite corners need Re nu > d and carry a rigorous integral tail bound.
inline NaiveResult naive_sum(const GeometrySpec& g, const Vec& x, const Vec& y, double nu,
                             NaiveOptions opt = {}) {
    using cplx = std::complex<double>;
    NaiveResult res{0.0, 0.0, 0.0L};
    long long used = 0;
    cplx acc = 0.0, comp = 0.0;
    auto add = [&](cplx v) {  // Kahan
        cplx t = v - comp;
        cplx s = acc + t;
        comp = (s - acc) - t;
        acc = s;
    };

    for (const GeometryTerm& term : g.terms) {
        const LatticeBasis& b = term.is_corner ? term.corner.basis : term.piped.basis;
        Vec off = (term.is_corner ? term.corner.offset : term.piped.offset) + x;
        double excl2 = 1e-20 * std::pow(b.volume, 2.0 / b.d);
        double coeff = term.coeff * (term.is_corner ? term.corner.sign : 1);

        std::array<std::int64_t, kMaxDim> counts{};
        std::array<double, kMaxDim> base{};
        if (term.is_corner) {
            if (!(nu > b.d))
                throw DomainError("naive corner sums need Re nu > d");
            double R = opt.corner_radius;
            if (R <= 0.0) throw DomainError("naive corner sums need a truncation radius");
            Vec u = matvec(b.Ainv, off);
            double reach = R / std::sqrt(b.sigma_min());
            for (int j = 0; j < b.d; ++j) {
                counts[j] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(u[j] + reach)) + 1);
                base[j] = 0.0;
            }
            // integral comparison bound on the dropped |z| > R part
            double colmax = 0.0;
            for (int j = 0; j < b.d; ++j) colmax = std::max(colmax, b.A.column(j).norm());
            double pad = 0.5 * std::sqrt(double(b.d)) * colmax;
            double surf = 2.0 * std::pow(M_PI, b.d / 2.0) / std::tgamma(b.d / 2.0);
            double tail = surf / b.volume * std::pow(R - pad, b.d - nu) / (nu - b.d);
            res.tail_bound += std::abs(coeff) * tail;
        } else {
            counts = term.piped.counts;
        }

        std::int64_t total = 1;
        for (int j = 0; j < b.d; ++j) total *= std::max<std::int64_t>(counts[j], 0);
        if (used + total > opt.budget)
            throw DomainError("naive summation budget exceeded");
        used += total;

        const bool truncate = term.is_corner;
        const double R2 = opt.corner_radius * opt.corner_radius;
        detail::enumerate_box(b.d, counts, [&](const std::array<std::int64_t, kMaxDim>& n) {
            Vec nv(b.d);
            for (int j = 0; j < b.d; ++j) nv[j] = static_cast<double>(n[j]) + base[j];
            Vec z = matvec(b.A, nv) - off;
            double r2 = z.norm2();
            if (r2 < excl2) return;
            if (truncate && r2 > R2) return;
            double phase = -2.0 * M_PI * dot(y, z);
            add(coeff * std::exp(cplx(0.0, phase)) * std::pow(r2, -0.5 * nu));
            res.points += 1.0L;
        });
    }
    if (res.tail_bound > opt.tol)
        throw TailTooLarge("increase the truncation radius", res.tail_bound);
    // phases ran over the shifted points z - x; restore the |x; y| convention
    res.value = acc * std::exp(cplx(0.0, -2.0 * M_PI * dot(y, x)));
    return res;
}

}  // namespace latticezeta
