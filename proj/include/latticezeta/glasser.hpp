#pragma once

// The seven reference lattice sums with known closed forms in terms of
// zeta(s), beta(s), A(s), B(s), and their realizations as corner zeta
// evaluations Z_{A N0^d, nu} | x ; y |  (S_i = factor * Z_i).

#include <cmath>

#include "latticezeta/linalg.hpp"
#include "latticezeta/reference.hpp"

namespace latticezeta {

struct GlasserCase {
    int which = 0;
    int d = 0;
    Mat A;
    Vec x;
    Vec y;
    double factor = 1.0;
};

inline GlasserCase glasser_case(int which) {
    GlasserCase g;
    g.which = which;
    switch (which) {
        case 1:
            g.d = 2;
            g.A = Mat::identity(2);
            g.x = Vec{-1.0, -1.0};
            g.y = Vec{0.0, 0.0};
            break;
        case 2:
            g.d = 2;
            g.A = Mat::identity(2);
            g.x = Vec{-1.0, -1.0};
            g.y = Vec{0.5, 0.5};
            break;
        case 3:
            g.d = 2;
            g.A = Mat::identity(2);
            g.x = Vec{-1.0, -1.0};
            g.y = Vec{0.5, 0.0};
            break;
        case 4:
            g.d = 2;
            g.A = Mat::identity(2);
            g.A(0, 0) = g.A(1, 1) = 2.0;
            g.x = Vec{-1.0, -1.0};
            g.y = Vec{0.0, 0.0};
            break;
        case 5:
            g.d = 2;
            g.A = Mat::identity(2);
            g.A(1, 1) = 2.0;
            g.x = Vec{-1.0, -2.0};
            g.y = Vec{0.0, 0.0};
            break;
        case 6:
            // odd-integer sum in four dimensions: 2Z^4 corner shifted to odd points
            g.d = 4;
            g.A = Mat::identity(4);
            for (int i = 0; i < 4; ++i) g.A(i, i) = 2.0;
            g.x = Vec{-1.0, -1.0, -1.0, -1.0};
            g.y = Vec{0.0, 0.0, 0.0, 0.0};
            break;
        case 7:
            g.d = 3;
            g.A = Mat::identity(3);
            g.x = Vec{-0.5, -1.0, -1.0};
            g.y = Vec{0.0, 0.5, 0.0};
            g.factor = -4.0;
            break;
        default:
            throw DomainError("glasser case out of range");
    }
    return g;
}

// closed forms for S_1 .. S_7
inline double glasser_reference(int which, double nu) {
    double s = 0.5 * nu;
    auto zeta = [](double v) { return riemann_zeta(v); };
    auto beta = [](double v) { return dirichlet_beta(v); };
    switch (which) {
        case 1:
            return zeta(s) * beta(s) - zeta(nu);
        case 2:
            return (std::pow(2.0, 1.0 - s) - 1.0) * zeta(s) * beta(s) +
                   (1.0 - std::pow(2.0, 1.0 - nu)) * zeta(nu);
        case 3:
            return (std::pow(2.0, -s) - std::pow(2.0, 1.0 - nu)) * zeta(s) * beta(s) +
                   std::pow(2.0, -nu) * zeta(nu);
        case 4:
            return std::pow(2.0, -s) * (1.0 - std::pow(2.0, -s)) * beta(s) * zeta(s);
        case 5:
            return 0.5 * (1.0 - std::pow(2.0, -s) + std::pow(2.0, 1.0 - nu)) * zeta(s) * beta(s) -
                   0.5 * (1.0 + std::pow(2.0, -nu)) * zeta(nu);
        case 6:
            return std::pow(2.0, -nu) * (1.0 - std::pow(2.0, -s)) *
                   (1.0 - std::pow(2.0, 1.0 - s)) * zeta(s) * zeta(s - 1.0);
        case 7: {
            double A2 = glasser_A(s), B2 = glasser_B(s);
            return std::pow(2.0, nu) *
                   (dirichlet_beta(nu - 1.0) - A2 * A2 + B2 * B2 -
                    (1.0 - std::pow(2.0, -s)) * zeta(s) * beta(s) +
                    (1.0 - std::pow(2.0, -nu)) * zeta(nu));
        }
        default:
            throw DomainError("glasser case out of range");
    }
}

}  // namespace latticezeta
