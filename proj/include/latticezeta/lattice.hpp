#pragma once

// Lattice bases: the generating matrix A (columns are lattice vectors)
// together with the cached quantities every evaluator needs: volume,
// eigenvalues of A^T A, inverses, and the upper-triangular factor U with
// U U^T = (A^T A / pi)^{-1}.

#include <cmath>

#include "latticezeta/errors.hpp"
#include "latticezeta/linalg.hpp"

namespace latticezeta {

struct LatticeBasis {
    int d = 0;
    Mat A;
    Mat Ainv;
    double volume = 0.0;
    std::array<double, kMaxDim> sigma{};  // eigenvalues of A^T A, descending
    Mat G;      // A^T A / pi
    Mat cholU;  // upper triangular, U U^T = G^{-1}, positive diagonal

    double sigma_max() const { return sigma[0]; }
    double sigma_min() const { return sigma[d - 1]; }
    double condition_number() const { return std::sqrt(sigma[0] / sigma[d - 1]); }

    static LatticeBasis from_columns(const Mat& A) {
        LatticeBasis b;
        b.d = A.n;
        if (b.d < 1 || b.d > kMaxDim) throw DomainError("dimension must be 1..4");
        b.A = A;
        double det = determinant(A);
        b.volume = std::abs(det);
        if (!(b.volume > 1e-14)) throw DomainError("lattice matrix is singular");
        b.Ainv = inverse(A);
        Mat ata = matmul(A.transposed(), A);
        b.sigma = symmetric_eigenvalues(ata);
        b.G = ata;
        for (int i = 0; i < b.d; ++i)
            for (int j = 0; j < b.d; ++j) b.G(i, j) /= M_PI;
        Mat l = cholesky_lower(b.G);
        b.cholU = invert_lower_triangular(l).transposed();
        return b;
    }

    // crystallographic parameters: d=1 (a), d=2 (a,b,gamma), d=3 (a,b,c,alpha,beta,gamma)
    static LatticeBasis from_parameters(double a) {
        Mat m(1);
        m(0, 0) = a;
        return from_columns(m);
    }
    static LatticeBasis from_parameters(double a, double b, double gamma) {
        Mat m(2);
        m(0, 0) = a;
        m(0, 1) = b * std::cos(gamma);
        m(1, 1) = b * std::sin(gamma);
        return from_columns(m);
    }
    static LatticeBasis from_parameters(double a, double b, double c, double alpha, double beta,
                                        double gamma) {
        Mat m(3);
        m(0, 0) = a;
        m(0, 1) = b * std::cos(gamma);
        m(1, 1) = b * std::sin(gamma);
        m(0, 2) = c * std::cos(beta);
        m(1, 2) = c * (std::cos(alpha) - std::cos(beta) * std::cos(gamma)) / std::sin(gamma);
        double cz2 = c * c - m(0, 2) * m(0, 2) - m(1, 2) * m(1, 2);
        if (!(cz2 > 0)) throw DomainError("lattice parameters do not span 3-space");
        m(2, 2) = std::sqrt(cz2);
        return from_columns(m);
    }

    // (a, b, c, alpha, beta, gamma) for d = 3
    std::array<double, 6> to_parameters() const {
        if (d != 3) throw DomainError("lattice parameters only defined for d = 3 here");
        Vec va = A.column(0), vb = A.column(1), vc = A.column(2);
        double a = va.norm(), b = vb.norm(), c = vc.norm();
        return {a,
                b,
                c,
                std::acos(dot(vb, vc) / (b * c)),
                std::acos(dot(va, vc) / (a * c)),
                std::acos(dot(va, vb) / (a * b))};
    }
};

}  // namespace latticezeta
