#pragma once
#include <cstdio>

// Evaluation of psi_{L}(t, y) for corner sets L = A N0^d - x through the
// generalized multidimensional Faddeeva function: a d-level recursion of
// 1-D Cauchy-type integrals against Gaussian slices.
//
//   psi(t, y) = exp(2 pi i x.y - pi t^2 x^2 + beta_gamma) / V
//               * phitilde_gamma(Ytilde(t)),   Y(t) = -A^T (y/t + i t x),
//
// with the argument reduced to the fundamental cell Re(t z_j) in [-1/2,1/2),
// the scaling beta_gamma = sum_j eta_j(zbar_gamma)^2, and per level either a
// plain Gaussian x f integral (pole of f above the axis or masked) or the
// analytic-continuation branch with residue terms and the i0^- integral.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "latticezeta/chebfit.hpp"
#include "latticezeta/faddeeva.hpp"
#include "latticezeta/geometry.hpp"
#include "latticezeta/quadrature.hpp"

namespace latticezeta {

using cplx = std::complex<double>;

namespace detail {

inline cplx cexpm1(cplx w) {
    if (std::abs(w) < 0.25) {
        cplx term = w, sum = w;
        for (int n = 2; n < 24; ++n) {
            term *= w / static_cast<double>(n);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::exp(w) - 1.0;
}

// int_R e^{-u^2}/(u - q) du; the lower half plane goes through w(-q) so no
// large intermediate appears. side picks the boundary value at real q.
inline cplx cauchy_gauss(cplx q, CauchySide side) {
    const cplx ipi(0.0, M_PI);
    if (q.imag() > 0.0) return ipi * faddeeva_w(q);
    if (q.imag() < 0.0) return -ipi * faddeeva_w(-q);
    return side == CauchySide::Plus ? ipi * faddeeva_w(q) : -ipi * faddeeva_w(-q);
}

// Piecewise Chebyshev interpolant of an expensive smooth slice. Panels split
// until the trailing coefficients decay below tolerance, so the deep levels
// of the recursion are sampled once per level instead of once per node.
class ChebSlice {
  public:
    template <class F>
    ChebSlice(F&& f, double a, double b, double tol) {
        struct Todo {
            double lo, hi;
            int depth;
        };
        std::vector<Todo> stack{{a, b, 0}};
        double vglobal = 1e-300;  // noise regions resolve against the global scale
        while (!stack.empty()) {
            Todo td = stack.back();
            stack.pop_back();
            Panel p;
            p.lo = td.lo;
            p.hi = td.hi;
            double mid = 0.5 * (td.lo + td.hi), half = 0.5 * (td.hi - td.lo);
            std::array<cplx, kOrder + 1> val;
            for (int i = 0; i <= kOrder; ++i)
                val[i] = f(mid + half * std::cos(M_PI * i / kOrder));
            for (int k = 0; k <= kOrder; ++k) {
                cplx s = 0.5 * (val[0] + (k % 2 ? -1.0 : 1.0) * val[kOrder]);
                for (int i = 1; i < kOrder; ++i) s += val[i] * std::cos(M_PI * i * k / kOrder);
                p.coef[k] = s * (2.0 / kOrder);
                vglobal = std::max(vglobal, std::abs(val[k]));
            }
            p.coef[0] *= 0.5;
            p.coef[kOrder] *= 0.5;
            double tail = std::max({std::abs(p.coef[kOrder]), std::abs(p.coef[kOrder - 1]),
                                    std::abs(p.coef[kOrder - 2])});
            if (tail > tol * vglobal && td.depth < 7) {
                stack.push_back({td.lo, mid, td.depth + 1});
                stack.push_back({mid, td.hi, td.depth + 1});
            } else {
                panels_.push_back(p);
            }
        }
        std::sort(panels_.begin(), panels_.end(),
                  [](const Panel& l, const Panel& r) { return l.lo < r.lo; });
#ifdef LZ_SLICE_DEBUG
        std::fprintf(stderr, "slice [%g,%g] panels=%zu\n", a, b, panels_.size());
#endif
    }

    cplx eval(double x) const {
        std::size_t lo = 0, hi = panels_.size() - 1;
        while (lo < hi) {
            std::size_t m = (lo + hi) / 2;
            if (x <= panels_[m].hi)
                hi = m;
            else
                lo = m + 1;
        }
        const Panel& p = panels_[lo];
        double u = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
        // Clenshaw
        cplx b1 = 0.0, b2 = 0.0;
        for (int k = kOrder; k >= 1; --k) {
            cplx b0 = p.coef[k] + 2.0 * u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        return p.coef[0] + u * b1 - b2;
    }

    std::size_t panel_count() const { return panels_.size(); }

  private:
    static constexpr int kOrder = 20;
    struct Panel {
        double lo, hi;
        std::array<cplx, kOrder + 1> coef;
    };
    std::vector<Panel> panels_;
};

}  // namespace detail

// ztilde: the point of z + Z^d/t with Re(t ztilde_j) in [-1/2, 1/2).
inline CVec reduce_to_cell(const CVec& z, cplx t,
                           std::array<long long, kMaxDim>* shifts = nullptr) {
    CVec out(z.n);
    for (int j = 0; j < z.n; ++j) {
        long long n = static_cast<long long>(std::floor((t * z[j]).real() + 0.5));
        out[j] = z[j] - static_cast<double>(n) / t;
        if (shifts) (*shifts)[j] = n;
    }
    return out;
}

// Delta_k(xi) = -i (g_1|...|g_k) G_k^{-1} (Im xi_1, ..., Im xi_k)^T:
// zeroes the imaginary parts of the first k coordinates while keeping
// eta_j, j > k, unchanged.
inline CVec delta_shift(int k, const CVec& xi, const Mat& g) {
    int d = g.n;
    Mat gk(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gk(i, j) = g(i, j);
    Vec im(k);
    for (int i = 0; i < k; ++i) im[i] = xi[i].imag();
    Vec sol = solve(gk, im);
    CVec delta(d);
    for (int i = 0; i < d; ++i) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += g(i, j) * sol[j];
        delta[i] = cplx(0.0, -acc);
    }
    return delta;
}

inline cplx psi_theta_reference(const CornerSpec& corner, double t, const Vec& y,
                                double eps = 1e-16);

enum class AccelPolicy {
    Auto,    // classical-Faddeeva acceleration when several pole images crowd the window
    Always,  // force it whenever the level qualifies
    Never,   // generic splitting only
};

struct PsiOptions {
    double eps = 1e-14;  // working precision of truncations/quadratures
    int fit_order = 20;  // monomial fit order for near-singular slices
    AccelPolicy accel = AccelPolicy::Auto;
    double phi_bound = 50.0;  // |phitilde| guard before PrecisionLoss
    // For real t outside the recursion's stability domain (the residue
    // realignment can push imaginary parts past the scaling budget on
    // strongly sheared lattices) the exponentially convergent theta sum is
    // used directly. Never triggers in the small-t splitting regime.
    bool allow_theta_fallback = true;
};

class PsiCornerEvaluator {
  public:
    PsiCornerEvaluator(const LatticeBasis& basis, const Vec& offset, const Vec& y,
                       PsiOptions opt = {})
        : b_(basis), x_(offset), opt_(opt) {
        d_ = b_.d;
        eps_ = std::max(opt.eps, 1e-15);
        s_ = std::sqrt(-std::log(eps_));
        u_ = matvec(b_.Ainv, x_);
        atx_ = matTvec(b_.A, x_);
        x2_ = x_.norm2();
        Vec w = matTvec(b_.A, y);
        phase_shift_ = 1.0;
        w_ = Vec(d_);
        for (int j = 0; j < d_; ++j) {
            double k = std::floor(w[j] + 0.5);
            w_[j] = w[j] - k;
            // removing the reciprocal-integer part contributes e^{2 pi i k u_j}
            phase_shift_ *= std::exp(cplx(0.0, 2.0 * M_PI * k * u_[j]));
            gamma_[j] = std::abs(w_[j]) <= 1e-12;
        }
        xy_ = dot(u_, w_);  // x . y' with y' = A^{-T} w'
        for (int j = 0; j < d_; ++j) {
            alpha_[j] = b_.cholU(j, j);
            // D_j = (g_1|..|g_j) G_j^{-1} e_j, used by the residue-branch shift
            Mat gj(j + 1);
            for (int r = 0; r <= j; ++r)
                for (int c = 0; c <= j; ++c) gj(r, c) = b_.G(r, c);
            Vec ej(j + 1);
            ej[j] = 1.0;
            Vec sol = solve(gj, ej);
            for (int r = 0; r < d_; ++r) {
                double acc = 0.0;
                for (int c = 0; c <= j; ++c) acc += b_.G(r, c) * sol[c];
                dshift_[j][r] = acc;
            }
        }
        diag_u_ = true;
        double uscale = 0.0;
        for (int j = 0; j < d_; ++j) uscale = std::max(uscale, std::abs(b_.cholU(j, j)));
        for (int i = 0; i < d_; ++i)
            for (int j = i + 1; j < d_; ++j)
                if (std::abs(b_.cholU(i, j)) > 1e-14 * uscale) diag_u_ = false;
    }

    const std::array<bool, kMaxDim>& gamma_mask() const { return gamma_; }
    const Vec& reduced_wave() const { return w_; }
    cplx wave_reduction_phase() const { return phase_shift_; }
    double truncation_halfwidth() const { return s_; }
    std::uint64_t kernel_evals() const { return f_evals_; }

    // psi of the corner set at the original y (reduction phase included)
    cplx psi(cplx t, bool use_mask) const { return phase_shift_ * psi_reduced(t, use_mask); }

    // psi at the reduced wave vector y' = A^{-T} w'
    cplx psi_reduced(cplx t, bool use_mask) const {
        if (t == 0.0) throw DomainError("psi needs t != 0");
        bool treal = (t.imag() == 0.0 && t.real() > 0.0);
        if (treal && opt_.allow_theta_fallback) {
            if (!recursion_stable(t.real())) return theta_direct(t.real());
            try {
                return psi_recursive(t, use_mask);
            } catch (const PrecisionLoss&) {
                return theta_direct(t.real());
            }
        }
        return psi_recursive(t, use_mask);
    }

    cplx theta_direct(double t) const {
        CornerSpec c;
        c.basis = b_;
        c.offset = x_;
        Vec yred = matvec(inverse(b_.A.transposed()), w_);
        return psi_theta_reference(c, t, yred, 1e-3 * eps_);
    }

    // true when the scaled recursion stays within its unit-size budget: the
    // scaling must not ask for more cancellation than doubles can deliver
    // (e^{-pi t^2 x^2 + beta} ~ 1) and one generation of residue
    // realignments must stay inside the budget
    bool recursion_stable(double t) const {
        CVec Y(d_);
        for (int j = 0; j < d_; ++j) Y[j] = -w_[j] / t - cplx(0.0, 1.0) * t * atx_[j];
        CVec zt = reduce_to_cell(Y, t);
        std::array<double, kMaxDim> eb2{};
        double beta_gamma = 0.0;
        for (int j = 0; j < d_; ++j) {
            double eta = 0.0;
            for (int l = 0; l <= j; ++l) eta += b_.cholU(l, j) * std::min(zt[l].imag(), 0.0);
            eb2[j] = eta * eta;
            beta_gamma += eb2[j];
        }
        if (beta_gamma > M_PI * t * t * x2_ + 5.0) return false;
        for (int j = 0; j < d_; ++j) {
            double im = zt[j].imag();
            if (im >= 0.0) continue;
            double lhs = alpha_[j] * im;
            if (lhs * lhs > eb2[j] + 2.0) return false;
            for (int l = j + 1; l < d_; ++l) {
                double im_l = zt[l].imag() - im * dshift_[j][l];
                double v = alpha_[l] * std::min(im_l, 0.0);
                if (v * v > eb2[l] + 2.0) return false;
            }
        }
        return true;
    }

    cplx psi_recursive(cplx t, bool use_mask) const {
        Frame fr;
        fr.t = t;
        fr.treal = (t.imag() == 0.0 && t.real() > 0.0);
        CVec Y(d_);
        for (int j = 0; j < d_; ++j) Y[j] = -w_[j] / t - cplx(0.0, 1.0) * t * atx_[j];
        CVec zt = reduce_to_cell(Y, t);
        for (int j = 0; j < d_; ++j) {
            fr.gamma[j] = use_mask ? gamma_[j] : true;
            fr.zbar[j] = std::min(zt[j].imag(), 0.0) * (fr.gamma[j] ? 1.0 : 0.0);
        }
        double beta_gamma = 0.0;
        for (int j = 0; j < d_; ++j) {
            double eta = 0.0;
            for (int l = 0; l <= j; ++l) eta += b_.cholU(l, j) * fr.zbar[l];
            fr.etabar2[j] = eta * eta;
            beta_gamma += fr.etabar2[j];
        }
        fr.suffix_scale[d_ - 1] = fr.etabar2[d_ - 1];
        for (int j = d_ - 2; j >= 0; --j)
            fr.suffix_scale[j] = fr.suffix_scale[j + 1] + fr.etabar2[j];
        // inner levels run tighter so their noise floor stays below the
        // outer levels' acceptance thresholds
        for (int j = 0; j < d_; ++j) fr.level_eps[j] = eps_ * std::pow(0.05, j);

        // the consistency assumption behind dropping all but one residue image
        if (fr.treal) {
            for (int j = 0; j < d_; ++j) {
                double im = zt[j].imag();
                if (im < 0.0 && fr.gamma[j]) {
                    double lhs = alpha_[j] * im;
                    if (lhs * lhs > fr.etabar2[j] + 0.5 * s_ * s_ + 4.0)
                        throw PrecisionLoss("imaginary part exceeds the scaling budget");
                }
            }
        }

        std::array<double, kMaxDim> xs{};
        cplx phi = phi_level(fr, 0, xs, zt.a);
        if (std::abs(phi) > opt_.phi_bound)
            throw PrecisionLoss("scaled Faddeeva value left its unit-size bound");

        cplx expo = cplx(0.0, 2.0 * M_PI * xy_) - M_PI * t * t * x2_ + beta_gamma;
        return std::exp(expo) * phi / b_.volume;
    }

  private:
    struct Frame {
        cplx t;
        bool treal = false;
        std::array<bool, kMaxDim> gamma{};
        std::array<double, kMaxDim> zbar{};
        std::array<double, kMaxDim> etabar2{};
        std::array<double, kMaxDim> suffix_scale{};  // sum of etabar2 over levels >= j
        std::array<double, kMaxDim> level_eps{};
    };

    double rel_floor(const Frame& fr, int j) const {
        return std::max(0.02 * fr.level_eps[j], 5e-14);
    }

    // f(u) = t / (1 - e^{-2 pi i t u}), reduced to the nearest pole image
    cplx f_eval(const Frame& fr, cplx du) const {
        ++f_evals_;
        cplx w = fr.t * du;
        double m = std::floor(w.real() + 0.5);
        return fr.t / (-detail::cexpm1(cplx(0.0, -2.0 * M_PI) * (w - m)));
    }
    // f(u) (u - p) with p = nearest pole; analytic across it
    cplx f_res(const Frame& fr, cplx u_minus_p) const {
        ++f_evals_;
        cplx w = fr.t * u_minus_p;
        if (w == 0.0) return 1.0 / cplx(0.0, 2.0 * M_PI);
        return w / (-detail::cexpm1(cplx(0.0, -2.0 * M_PI) * w));
    }

    // phitilde^{(k)}: xs holds the k frozen real coordinates, suffix the
    // current (possibly shifted) ztilde values from position k on. The
    // deeper functor takes an optional replacement suffix (used after the
    // residue branch realigned the remaining coordinates).
    cplx phi_level(const Frame& fr, int k, std::array<double, kMaxDim>& xs,
                   const std::array<cplx, kMaxDim>& suffix) const {
        if (k == d_) return 1.0;
        if (diag_u_) {
            // decoupled levels multiply; the residue realignment is trivial
            // because D_j has no reach past coordinate j here
            cplx prod = 1.0;
            for (int j = k; j < d_; ++j)
                prod *= level_value(
                    fr, j, 0.0, suffix[j], suffix,
                    [](double, const std::array<cplx, kMaxDim>*) { return cplx(1.0); });
            return prod;
        }
        const int j = k;
        double beta = 0.0;
        for (int l = 0; l < k; ++l) beta += b_.cholU(l, j) * xs[l];
        auto deeper_direct = [&](double xi, const std::array<cplx, kMaxDim>* override_suffix) {
            xs[k] = xi;
            return phi_level(fr, k + 1, xs, override_suffix ? *override_suffix : suffix);
        };
        if (j == d_ - 1)
            return level_value(fr, j, beta, suffix[j], suffix, deeper_direct);

        // interpolate the deeper slice once; the level integrals then sample
        // a cheap polynomial instead of recursing per node
        const double a = (-beta - s_) / alpha_[j];
        const double b = (-beta + s_) / alpha_[j];
        detail::ChebSlice slice([&](double xi) { return deeper_direct(xi, nullptr); }, a, b,
                                1e-12);
        auto deeper = [&](double xi, const std::array<cplx, kMaxDim>* override_suffix) {
            if (override_suffix) return deeper_direct(xi, override_suffix);
            if (xi >= a && xi <= b) return slice.eval(xi);
            return deeper_direct(xi, nullptr);
        };
        return level_value(fr, j, beta, suffix[j], suffix, deeper);
    }

    // single level: residue images of crossed poles plus the [a_j, b_j]
    // Gaussian x f integral against the deeper value
    template <class Deeper>
    cplx level_value(const Frame& fr, int j, double beta, cplx zj,
                     const std::array<cplx, kMaxDim>& suffix, Deeper&& deeper) const {
        const double alpha = alpha_[j];
        const double a = (-beta - s_) / alpha;
        const double b = (-beta + s_) / alpha;
        const double ebar2 = fr.etabar2[j];

        cplx result = 0.0;
        const bool branch = fr.gamma[j] && zj.imag() < 0.0;

        if (branch) {
            // residue terms of the crossed poles; on the real-t path every
            // image shares the sign of Im z and contributes with its Gaussian
            // weight, on the contour only the reduced image is kept
            long long n_lo = 0, n_hi = 0;
            if (fr.treal) {
                double t = fr.t.real();
                double rlo = ((-s_ - 4.0 - beta) / alpha - zj.real()) * t;
                double rhi = ((s_ + 4.0 - beta) / alpha - zj.real()) * t;
                n_lo = static_cast<long long>(std::ceil(std::min(rlo, rhi)));
                n_hi = static_cast<long long>(std::floor(std::max(rlo, rhi)));
                n_lo = std::max(n_lo, -1024LL);
                n_hi = std::min(n_hi, 1024LL);
            }
            for (long long n = n_lo; n <= n_hi; ++n) {
                cplx p = zj + static_cast<double>(n) / fr.t;
                if (!(p.imag() < 0.0)) continue;
                cplx eta = alpha * p + beta;
                cplx expo = -eta * eta - ebar2;
                double deeper_bound = (j + 1 < d_) ? std::exp(-fr.suffix_scale[j + 1]) : 1.0;
                if (std::exp(expo.real()) * deeper_bound * 20.0 <
                    0.05 * fr.level_eps[j] * std::exp(-fr.suffix_scale[j]))
                    continue;
                // real-ize coordinate j and realign the deeper arguments
                std::array<cplx, kMaxDim> shifted = suffix;
                shifted[j] = p.real();
                for (int l = j + 1; l < d_; ++l)
                    shifted[l] = suffix[l] + cplx(0.0, -p.imag() * dshift_[j][l]);
                result += std::exp(expo) * deeper(p.real(), &shifted);
            }
        }

        auto integrand = [&](double xi) {
            double eta = alpha * xi + beta;
            return std::exp(cplx(-eta * eta - ebar2)) * f_eval(fr, xi - zj) *
                   deeper(xi, nullptr);
        };

        const double tol_abs = fr.level_eps[j] * std::exp(-fr.suffix_scale[j]);
        const double tol_rel = rel_floor(fr, j);
        const CauchySide side = branch ? CauchySide::Minus : CauchySide::Plus;

        // pole images of f near the integration window: intersect the index
        // ranges allowed by |Im p| < 1/alpha and Re p inside the window
        double delta = near_delta(fr, j, a, b);
        std::vector<cplx> near;
        {
            cplx step = 1.0 / fr.t;
            double n_lo2 = -1e18, n_hi2 = 1e18;
            auto restrict = [&](double coef, double lo, double hi) {
                // lo <= base + n coef <= hi with base folded into lo/hi
                if (std::abs(coef) < 1e-14) {
                    if (0.0 < lo || 0.0 > hi) {
                        n_lo2 = 1.0;
                        n_hi2 = 0.0;  // empty
                    }
                    return;
                }
                double r1 = lo / coef, r2 = hi / coef;
                n_lo2 = std::max(n_lo2, std::min(r1, r2));
                n_hi2 = std::min(n_hi2, std::max(r1, r2));
            };
            restrict(step.imag(), -1.0 / alpha - zj.imag(), 1.0 / alpha - zj.imag());
            restrict(step.real(), a - 2.0 * delta - zj.real(), b + 2.0 * delta - zj.real());
            if (n_hi2 >= n_lo2) {
                long long lo_i = static_cast<long long>(std::ceil(n_lo2 - 0.5)) ;
                long long hi_i = static_cast<long long>(std::floor(n_hi2 + 0.5));
                if (hi_i - lo_i < 4096) {
                    for (long long n = lo_i; n <= hi_i; ++n) {
                        cplx p = zj + static_cast<double>(n) * step;
                        if (std::abs(p.imag()) * alpha >= 1.0) continue;
                        if (p.real() < a - 2.0 * delta || p.real() > b + 2.0 * delta) continue;
                        near.push_back(p);
                    }
                }
            }
            std::sort(near.begin(), near.end(),
                      [](cplx lhs, cplx rhs) { return lhs.real() < rhs.real(); });
        }

        const bool innermost = (j == d_ - 1) || diag_u_;
        const bool want_accel =
            opt_.accel == AccelPolicy::Always ||
            (opt_.accel == AccelPolicy::Auto && near.size() >= 3);
        if (innermost && fr.treal && opt_.accel != AccelPolicy::Never && want_accel) {
            // the pole subtraction handles near and far images alike; when it
            // declines (too many images, node collisions) the split machinery
            // below takes over
            bool done = false;
            cplx accel = inner_integral_accelerated(fr, j, alpha, beta, a, b, zj, side, &done);
            if (done) return result + accel;
        }

        if (near.empty()) {
            result += adaptive_integrate(integrand, a, b, tol_abs, tol_rel).value;
            return result;
        }

        // three-interval splits around each near pole: moment integrals on
        // the middles, adaptive quadrature on the gaps
        double cur = a;
        for (std::size_t i = 0; i < near.size(); ++i) {
            cplx p = near[i];
            double dl = delta, dr = delta;
            if (i > 0) dl = std::min(dl, 0.49 * (p.real() - near[i - 1].real()));
            if (i + 1 < near.size()) dr = std::min(dr, 0.49 * (near[i + 1].real() - p.real()));
            double lo = std::max(cur, p.real() - dl);
            double hi = std::min(b, p.real() + dr);
            if (lo > cur)
                result +=
                    adaptive_integrate(integrand, cur, std::min(lo, b), tol_abs, tol_rel).value;
            if (hi > lo)
                result += moment_integral(fr, j, alpha, beta, lo, hi, zj, p, side, deeper, ebar2);
            cur = std::max(cur, hi);
            if (cur >= b) break;
        }
        if (cur < b) result += adaptive_integrate(integrand, cur, b, tol_abs, tol_rel).value;
        return result;
    }

    double near_delta(const Frame& fr, int j, double a, double b) const {
        double ratio = 1e300;
        for (int c = j + 1; c < d_; ++c)
            if (std::abs(b_.cholU(j, c)) > 0.0)
                ratio = std::min(ratio, std::abs(b_.cholU(j, j) / b_.cholU(j, c)));
        double delta = (b - a) / 6.0 * std::min(ratio, 1.0);
        delta = std::min(delta, 0.5 * (b - a));
        delta = std::min(delta, 1.5 / alpha_[j]);
        delta = std::min(delta, 0.3 / std::abs(fr.t));
        return delta;
    }

    // int over the middle interval of gauss * f * deeper via monomial fit of
    // the pole-free factor and analytic Cauchy moments; on FitFailed the
    // middle shrinks around the pole and the trimmed pieces go to quadrature
    template <class Deeper>
    cplx moment_integral(const Frame& fr, int j, double alpha, double beta, double lo, double hi,
                         cplx zj, cplx pole, CauchySide side, Deeper&& deeper,
                         double ebar2) const {
        auto smooth = [&](double xi) {
            double eta = alpha * xi + beta;
            return std::exp(cplx(-eta * eta - ebar2)) * f_res(fr, xi - pole) *
                   deeper(xi, nullptr);
        };
        auto integrand = [&](double xi) {
            double eta = alpha * xi + beta;
            return std::exp(cplx(-eta * eta - ebar2)) * f_eval(fr, xi - zj) *
                   deeper(xi, nullptr);
        };
        const double tol_abs = fr.level_eps[j] * std::exp(-fr.suffix_scale[j]);
        {
            // skip middles where the Gaussian slice is already negligible
            double e_lo = alpha * lo + beta, e_hi = alpha * hi + beta;
            double emin2 = (e_lo * e_hi > 0.0) ? std::min(e_lo * e_lo, e_hi * e_hi) : 0.0;
            if (std::exp(-emin2 - ebar2) * 8.0 < tol_abs) return 0.0;
        }
        cplx trimmed = 0.0;
        double half = 0.5 * (hi - lo);
        for (int attempt = 0;; ++attempt) {
            double center;
            if (attempt == 0) {
                center = 0.5 * (lo + hi);
            } else {
                half *= 0.5;
                center = std::clamp(pole.real(), lo + half, hi - half);
                double nlo = center - half, nhi = center + half;
                if (nlo > lo)
                    trimmed +=
                        adaptive_integrate(integrand, lo, nlo, tol_abs, rel_floor(fr, j)).value;
                if (nhi < hi)
                    trimmed +=
                        adaptive_integrate(integrand, nhi, hi, tol_abs, rel_floor(fr, j)).value;
                lo = nlo;
                hi = nhi;
            }
            try {
                MonomialFit fit =
                    chebyshev_monomial_fit(smooth, center, half, opt_.fit_order, 1e-11);
                cplx ps = (pole - center) / half;
                auto mom = cauchy_moments((lo - center) / half, (hi - center) / half, 0.0, ps,
                                          opt_.fit_order, side);
                cplx acc = 0.0;
                for (int n = opt_.fit_order; n >= 0; --n) acc += fit.coeff[n] * mom[n];
                return trimmed + acc;
            } catch (const FitFailed&) {
                if (attempt >= 3) throw;
            }
        }
    }

    // innermost level for real t: pole-subtracted Cauchy representation on a
    // circle, remaining integrals through the classical Faddeeva function
    cplx inner_integral_accelerated(const Frame& fr, int j, double alpha, double beta, double a,
                                    double b, cplx zj, CauchySide side, bool* done) const {
        const double t = fr.t.real();
        const double r = b - a;
        const double m0 = 0.5 * (a + b);
        const double ebar2 = fr.etabar2[j];
        const double scale = std::exp(-ebar2);
        *done = false;

        // subtract every pole within 3r of the disk center
        long long k_lo = static_cast<long long>(std::ceil((m0 - 3.0 * r - zj.real()) * t));
        long long k_hi = static_cast<long long>(std::floor((m0 + 3.0 * r - zj.real()) * t));
        k_lo = std::min(k_lo, 0LL);
        k_hi = std::max(k_hi, 0LL);
        if (k_hi - k_lo > 100) return 0.0;
        double rprime = std::min(std::abs((m0 - zj.real()) * t - (k_lo - 1)) / t,
                                 std::abs((k_hi + 1) - (m0 - zj.real()) * t) / t);
        int m = 18;
        if (rprime < 8.0 * r)
            m = std::min(
                64, std::max(18, (int)std::ceil(38.0 / std::log(std::max(rprime / r, 1.5)))));

        // trapezoid nodes, rotated until none collides with a pole
        double rot = 0.0;
        const double golden = 2.0 * M_PI * 0.3819660112501051;
        std::vector<cplx> nodes(m);
        bool ok = false;
        for (int attempt = 0; attempt < 3 && !ok; ++attempt, rot += golden) {
            ok = true;
            for (int i = 0; i < m; ++i) {
                nodes[i] = m0 + r * std::exp(cplx(0.0, 2.0 * M_PI * i / m + rot));
                for (long long kk = k_lo - 1; kk <= k_hi + 1 && ok; ++kk) {
                    cplx p = zj + static_cast<double>(kk) / t;
                    if (std::abs(nodes[i] - p) < 0.02 * r) ok = false;
                }
                if (!ok) break;
            }
        }
        if (!ok) return 0.0;
        *done = true;

        const cplx two_pi_i(0.0, 2.0 * M_PI);
        cplx acc = 0.0;
        for (int i = 0; i < m; ++i) {
            cplx zeta = nodes[i];
            cplx phi = f_eval(fr, zeta - zj);
            for (long long kk = k_lo; kk <= k_hi; ++kk)
                phi -= 1.0 / (two_pi_i * (zeta - zj - static_cast<double>(kk) / t));
            cplx wgt = phi * (zeta - m0) / static_cast<double>(m);
            acc -= wgt * detail::cauchy_gauss(alpha * zeta + beta, side);
        }
        for (long long kk = k_lo; kk <= k_hi; ++kk) {
            cplx p = zj + static_cast<double>(kk) / t;
            acc += detail::cauchy_gauss(alpha * p + beta, side) / two_pi_i;
        }
        return scale * acc;
    }

    LatticeBasis b_;
    Vec x_;
    PsiOptions opt_;
    int d_ = 0;
    double eps_ = 1e-14, s_ = 0.0;
    Vec u_;    // A^{-1} x
    Vec atx_;  // A^T x
    Vec w_;    // reduced A^T y
    double x2_ = 0.0, xy_ = 0.0;
    cplx phase_shift_ = 1.0;
    std::array<bool, kMaxDim> gamma_{};
    std::array<double, kMaxDim> alpha_{};
    std::array<std::array<double, kMaxDim>, kMaxDim> dshift_{};
    bool diag_u_ = false;
    mutable std::uint64_t f_evals_ = 0;
};

// One-shot evaluation of psi_{A N0^d - x}(t, y).
inline cplx psi_corner(const CornerSpec& corner, cplx t, const Vec& y, PsiOptions opt = {}) {
    PsiCornerEvaluator ev(corner.basis, corner.offset, y, opt);
    return ev.psi(t, /*use_mask=*/t.imag() != 0.0);
}

// Direct theta-sum oracle for real t, truncated at negligible weight.
inline cplx psi_theta_reference(const CornerSpec& corner, double t, const Vec& y,
                                double eps) {
    int d = corner.basis.d;
    double rad = std::sqrt(-std::log(eps) / M_PI) / t;
    Vec u = matvec(corner.basis.Ainv, corner.offset);
    double reach = rad / std::sqrt(corner.basis.sigma_min());
    std::array<long long, kMaxDim> lo{}, hi{};
    for (int j = 0; j < d; ++j) {
        lo[j] = static_cast<long long>(std::floor(u[j] - reach)) - 1;
        hi[j] = static_cast<long long>(std::ceil(u[j] + reach)) + 1;
        lo[j] = std::max(lo[j], 0LL);
        if (hi[j] < lo[j]) return 0.0;
    }
    cplx sum = 0.0;
    std::array<long long, kMaxDim> n = lo;
    for (;;) {
        Vec nv(d);
        for (int j = 0; j < d; ++j) nv[j] = static_cast<double>(n[j]);
        Vec z = matvec(corner.basis.A, nv) - corner.offset;
        double z2 = z.norm2();
        if (M_PI * t * t * z2 < -std::log(eps) + 8.0) {
            double phase = -2.0 * M_PI * dot(y, z);
            sum += std::exp(cplx(0.0, phase)) * std::exp(-M_PI * t * t * z2);
        }
        int j = 0;
        while (j < d && ++n[j] > hi[j]) n[j++] = lo[j];
        if (j == d) break;
    }
    return std::pow(t, d) * sum;
}

}  // namespace latticezeta
