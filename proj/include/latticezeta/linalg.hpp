#pragma once

// Dense linear algebra for the tiny dimensions (d <= 4) this library works in.
// Fixed-capacity storage, no allocation.

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>

#include "latticezeta/errors.hpp"

namespace latticezeta {

inline constexpr int kMaxDim = 4;

struct Vec {
    int n = 0;
    std::array<double, kMaxDim> a{};

    Vec() = default;
    explicit Vec(int n_) : n(n_) {}
    Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
        int i = 0;
        for (double x : xs) a[i++] = x;
    }
    double& operator[](int i) { return a[i]; }
    double operator[](int i) const { return a[i]; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += a[i] * a[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec operator+(const Vec& x, const Vec& y) {
    Vec r(x.n);
    for (int i = 0; i < x.n; ++i) r[i] = x[i] + y[i];
    return r;
}
inline Vec operator-(const Vec& x, const Vec& y) {
    Vec r(x.n);
    for (int i = 0; i < x.n; ++i) r[i] = x[i] - y[i];
    return r;
}
inline Vec operator*(double s, const Vec& x) {
    Vec r(x.n);
    for (int i = 0; i < x.n; ++i) r[i] = s * x[i];
    return r;
}
inline Vec operator-(const Vec& x) { return -1.0 * x; }
inline double dot(const Vec& x, const Vec& y) {
    double s = 0;
    for (int i = 0; i < x.n; ++i) s += x[i] * y[i];
    return s;
}

struct Mat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    Mat() = default;
    explicit Mat(int n_) : n(n_) {}
    double& operator()(int i, int j) { return a[i * kMaxDim + j]; }
    double operator()(int i, int j) const { return a[i * kMaxDim + j]; }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    Vec column(int j) const {
        Vec c(n);
        for (int i = 0; i < n; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(int j, const Vec& c) {
        for (int i = 0; i < n; ++i) (*this)(i, j) = c[i];
    }
    Mat transposed() const {
        Mat m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
};

inline Vec matvec(const Mat& m, const Vec& x) {
    Vec r(m.n);
    for (int i = 0; i < m.n; ++i) {
        double s = 0;
        for (int j = 0; j < m.n; ++j) s += m(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

// m^T x without forming the transpose.
inline Vec matTvec(const Mat& m, const Vec& x) {
    Vec r(m.n);
    for (int j = 0; j < m.n; ++j) {
        double s = 0;
        for (int i = 0; i < m.n; ++i) s += m(i, j) * x[i];
        r[j] = s;
    }
    return r;
}

inline Mat matmul(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) {
            double s = 0;
            for (int k = 0; k < x.n; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

inline double determinant(const Mat& m) {
    Mat t = m;
    double det = 1.0;
    for (int c = 0; c < t.n; ++c) {
        int p = c;
        for (int r = c + 1; r < t.n; ++r)
            if (std::abs(t(r, c)) > std::abs(t(p, c))) p = r;
        if (t(p, c) == 0.0) return 0.0;
        if (p != c) {
            for (int j = 0; j < t.n; ++j) std::swap(t(p, j), t(c, j));
            det = -det;
        }
        det *= t(c, c);
        for (int r = c + 1; r < t.n; ++r) {
            double f = t(r, c) / t(c, c);
            for (int j = c; j < t.n; ++j) t(r, j) -= f * t(c, j);
        }
    }
    return det;
}

inline Mat inverse(const Mat& m) {
    int n = m.n;
    Mat t = m, inv = Mat::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(t(r, c)) > std::abs(t(p, c))) p = r;
        if (t(p, c) == 0.0) throw DomainError("singular matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(t(p, j), t(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        double piv = t(c, c);
        for (int j = 0; j < n; ++j) {
            t(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = t(r, c);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                t(r, j) -= f * t(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

inline Vec solve(const Mat& m, const Vec& b) { return matvec(inverse(m), b); }

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
inline Mat cholesky_lower(const Mat& g) {
    int n = g.n;
    Mat l(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw DomainError("matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

inline Mat invert_lower_triangular(const Mat& l) {
    int n = l.n;
    Mat inv(n);
    for (int j = 0; j < n; ++j) {
        inv(j, j) = 1.0 / l(j, j);
        for (int i = j + 1; i < n; ++i) {
            double s = 0;
            for (int k = j; k < i; ++k) s += l(i, k) * inv(k, j);
            inv(i, j) = -s / l(i, i);
        }
    }
    return inv;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi, returned in descending order.
inline std::array<double, kMaxDim> symmetric_eigenvalues(const Mat& m) {
    Mat t = m;
    int n = t.n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += t(i, j) * t(i, j);
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(t(p, q)) < 1e-300) continue;
                double theta = (t(q, q) - t(p, p)) / (2.0 * t(p, q));
                double sgn = theta >= 0 ? 1.0 : -1.0;
                double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(tt * tt + 1.0), s = tt * c;
                for (int k = 0; k < n; ++k) {
                    double tpk = t(p, k), tqk = t(q, k);
                    t(p, k) = c * tpk - s * tqk;
                    t(q, k) = s * tpk + c * tqk;
                }
                for (int k = 0; k < n; ++k) {
                    double tkp = t(k, p), tkq = t(k, q);
                    t(k, p) = c * tkp - s * tkq;
                    t(k, q) = s * tkp + c * tkq;
                }
            }
    }
    std::array<double, kMaxDim> ev{};
    for (int i = 0; i < n; ++i) ev[i] = t(i, i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (ev[j] > ev[i]) std::swap(ev[i], ev[j]);
    return ev;
}

// Complex d-vector companion used by the Faddeeva recursion.
struct CVec {
    int n = 0;
    std::array<std::complex<double>, kMaxDim> a{};

    CVec() = default;
    explicit CVec(int n_) : n(n_) {}
    explicit CVec(const Vec& v) : n(v.n) {
        for (int i = 0; i < n; ++i) a[i] = v[i];
    }
    std::complex<double>& operator[](int i) { return a[i]; }
    std::complex<double> operator[](int i) const { return a[i]; }
};

}  // namespace latticezeta
