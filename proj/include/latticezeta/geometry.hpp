#pragma once

// Geometry descriptions (corners, parallelepipeds, signed recombinations)
// and the decompositions that reduce everything to corners with offsets in
// the valid region (A^{-1} x componentwise negative).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "latticezeta/lattice.hpp"

namespace latticezeta {

inline constexpr double kMembershipTol = 1e-9;

// Point set A N0^d - x. The basis may carry sign-flipped columns from
// reflections; sign and phase accumulate through recombinations.
struct CornerSpec {
    LatticeBasis basis;
    Vec offset;  // x
    int sign = 1;
    std::complex<double> phase = 1.0;

    bool contains(const Vec& z, double tol = kMembershipTol) const {
        Vec u = matvec(basis.Ainv, z + offset);
        for (int j = 0; j < basis.d; ++j) {
            double r = std::round(u[j]);
            if (std::abs(u[j] - r) > tol || r < -0.5) return false;
        }
        return true;
    }
};

// Point set A * prod_j {0..n_j - 1} - x; empty when some n_j = 0.
struct ParallelepipedSpec {
    LatticeBasis basis;
    std::array<std::int64_t, kMaxDim> counts{};
    Vec offset;

    long double point_count() const {
        long double c = 1.0L;
        for (int j = 0; j < basis.d; ++j) c *= static_cast<long double>(counts[j]);
        return c;
    }
    bool contains(const Vec& z, double tol = kMembershipTol) const {
        Vec u = matvec(basis.Ainv, z + offset);
        for (int j = 0; j < basis.d; ++j) {
            double r = std::round(u[j]);
            if (std::abs(u[j] - r) > tol || r < -0.5 || r > counts[j] - 0.5) return false;
        }
        return true;
    }
};

struct GeometryTerm {
    int coeff = 1;  // +1 or -1
    bool is_corner = false;
    CornerSpec corner;
    ParallelepipedSpec piped;

    int dimension() const { return is_corner ? corner.basis.d : piped.basis.d; }
};

struct GeometrySpec {
    std::vector<GeometryTerm> terms;

    int dimension() const { return terms.empty() ? 0 : terms.front().dimension(); }
    bool all_finite() const {
        for (const auto& t : terms)
            if (t.is_corner) return false;
        return true;
    }
    long double point_count() const {
        long double n = 0.0L;
        for (const auto& t : terms) {
            if (t.is_corner) throw DomainError("point count of an infinite geometry");
            n += t.coeff * t.piped.point_count();
        }
        return n;
    }
    int indicator(const Vec& z) const {
        int s = 0;
        for (const auto& t : terms)
            s += t.coeff * (t.is_corner ? t.corner.contains(z) : t.piped.contains(z));
        return s;
    }

    static GeometrySpec single(const ParallelepipedSpec& p) {
        GeometrySpec g;
        g.terms.push_back(GeometryTerm{1, false, {}, p});
        return g;
    }
    static GeometrySpec single(const CornerSpec& c) {
        GeometrySpec g;
        g.terms.push_back(GeometryTerm{1, true, c, {}});
        return g;
    }
};

// Parallelepiped as the alternating sum of 2^d corners L0 + A c_alpha.
inline std::vector<CornerSpec> decompose_parallelepiped(const ParallelepipedSpec& p) {
    int d = p.basis.d;
    std::vector<CornerSpec> out;
    out.reserve(std::size_t(1) << d);
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec c(d);
        int sgn = 1;
        for (int j = 0; j < d; ++j) {
            if (mask & (1 << j)) {
                c[j] = static_cast<double>(p.counts[j]);
                sgn = -sgn;
            }
        }
        CornerSpec corner;
        corner.basis = p.basis;
        corner.offset = p.offset - matvec(p.basis.A, c);
        corner.sign = sgn;
        out.push_back(std::move(corner));
    }
    return out;
}

namespace detail {

inline LatticeBasis flip_columns(const LatticeBasis& b, unsigned mask) {
    if (mask == 0) return b;
    Mat m = b.A;
    for (int j = 0; j < b.d; ++j)
        if (mask & (1u << j))
            for (int i = 0; i < b.d; ++i) m(i, j) = -m(i, j);
    return LatticeBasis::from_columns(m);
}

}  // namespace detail

// Splits a corner with arbitrary offset into corners satisfying the valid
// region condition, using per coordinate
//   1_{N0} = 1_{k+N0} + 1_{(k-1)-N0} - 1_{(-1)-N0},  k = floor(u_j) + 1.
// With strict=true an offset coinciding with a corner point is an error;
// the engine runs with strict=false so self-interaction queries (the primed
// exclusion point on the geometry) are handled by the kernel's G(0) limit.
inline std::vector<CornerSpec> normalize_corner_offset(const CornerSpec& c, bool strict = true) {
    int d = c.basis.d;
    Vec u = matvec(c.basis.Ainv, c.offset);

    if (strict) {
        bool on_lattice = true;
        for (int j = 0; j < d; ++j) {
            double r = std::round(u[j]);
            if (std::abs(u[j] - r) > kMembershipTol || r < -0.5) on_lattice = false;
        }
        if (on_lattice) throw OffsetOnLattice("corner offset coincides with a lattice point");
    }

    struct Choice {
        int coeff;
        bool flip;
        double shift;  // b_j in n -> s_j n + b_j
    };
    std::array<std::vector<Choice>, kMaxDim> choices;
    for (int j = 0; j < d; ++j) {
        double uj = u[j];
        double r = std::round(uj);
        if (std::abs(uj - r) < kMembershipTol) uj = r;  // snap to the lattice plane
        if (uj < 0.0) {
            choices[j] = {{1, false, 0.0}};
        } else {
            double k = std::floor(uj) + 1.0;
            choices[j] = {{1, false, k}, {1, true, k - 1.0}, {-1, true, -1.0}};
        }
    }

    std::vector<CornerSpec> out;
    std::array<int, kMaxDim> idx{};
    while (true) {
        int coeff = 1;
        unsigned flipmask = 0;
        Vec b(d);
        for (int j = 0; j < d; ++j) {
            const Choice& ch = choices[j][idx[j]];
            coeff *= ch.coeff;
            if (ch.flip) flipmask |= (1u << j);
            b[j] = ch.shift;
        }
        CornerSpec corner;
        corner.basis = detail::flip_columns(c.basis, flipmask);
        corner.offset = c.offset - matvec(c.basis.A, b);
        corner.sign = c.sign * coeff;
        corner.phase = c.phase;
        out.push_back(std::move(corner));

        int j = 0;
        while (j < d && ++idx[j] == static_cast<int>(choices[j].size())) idx[j++] = 0;
        if (j == d) break;
    }
    return out;
}

// 2^d corners partitioning the full lattice A Z^d: per flipped coordinate
// subset S the set uses n -> -n - 1, i.e. offset A 1_S on the reflected basis.
inline std::vector<CornerSpec> full_lattice_corners(const LatticeBasis& basis) {
    int d = basis.d;
    std::vector<CornerSpec> out;
    out.reserve(std::size_t(1) << d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vec b(d);
        for (int j = 0; j < d; ++j) b[j] = (mask & (1u << j)) ? -1.0 : 0.0;
        CornerSpec corner;
        corner.basis = detail::flip_columns(basis, mask);
        corner.offset = -matvec(basis.A, b);
        corner.sign = 1;
        out.push_back(std::move(corner));
    }
    return out;
}

// Diamond-shaped annulus slab L/4 <= |x1|+|x2| <= L/2, |x3| <= L/40 on the
// cubic lattice a Z^3, assembled from boxes of the index-2 rotated sublattice
// spanned by a(1,1,0), a(1,-1,0), a(0,0,1) and its shifted coset.
inline GeometrySpec build_diamond_annulus_slab(double a, double L) {
    double ratio = L / a;
    std::int64_t Lp = static_cast<std::int64_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(Lp)) > 1e-9 * std::max(1.0, ratio) || Lp % 8 != 0)
        throw IncompatibleScale("outer edge must be a multiple of 8 lattice constants");

    Mat B(3);
    B(0, 0) = a;
    B(1, 0) = a;
    B(0, 1) = a;
    B(1, 1) = -a;
    B(2, 2) = a;
    LatticeBasis rot = LatticeBasis::from_columns(B);

    std::int64_t M1 = Lp / 8, M2 = Lp / 4;
    std::int64_t h = Lp / 40;  // |x3| <= L/40 keeps planes -h..h

    GeometrySpec g;
    auto add_box = [&](int coeff, std::int64_t p0, std::int64_t p1, std::int64_t q0,
                       std::int64_t q1, bool odd_coset) {
        if (p1 < p0 || q1 < q0) return;
        ParallelepipedSpec piped;
        piped.basis = rot;
        piped.counts = {p1 - p0 + 1, q1 - q0 + 1, 2 * h + 1, 0};
        Vec base{static_cast<double>(p0), static_cast<double>(q0), static_cast<double>(-h)};
        piped.offset = -matvec(B, base);
        if (odd_coset) {
            piped.offset[0] -= a;  // shift by a(1,0,0)
        }
        g.terms.push_back(GeometryTerm{coeff, false, {}, piped});
    };

    // even coset (u+v even): |u|+|v| = 2 max(|p|,|q|)
    add_box(+1, -M2, M2, -M2, M2, false);
    add_box(-1, -(M1 - 1), M1 - 1, -(M1 - 1), M1 - 1, false);
    // odd coset: |u|+|v| = max(|2p+1|, |2q+1|)
    add_box(+1, -M2, M2 - 1, -M2, M2 - 1, true);
    add_box(-1, -M1, M1 - 1, -M1, M1 - 1, true);
    return g;
}

// Validation helper: the signed indicator must stay in {0,1} on a randomized
// sample drawn from the bounding lattice box of the finite terms.
inline bool validate_indicator(const GeometrySpec& g, int samples = 1000,
                               std::uint32_t seed = 20240301) {
    if (g.terms.empty() || !g.all_finite()) return true;
    const LatticeBasis& basis = g.terms.front().piped.basis;
    int d = basis.d;
    // bounding box in the first term's lattice coordinates
    double lo[kMaxDim], hi[kMaxDim];
    for (int j = 0; j < d; ++j) {
        lo[j] = 1e300;
        hi[j] = -1e300;
    }
    for (const auto& t : g.terms) {
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec corner(d);
            for (int j = 0; j < d; ++j)
                corner[j] = (mask & (1 << j)) ? static_cast<double>(t.piped.counts[j]) : 0.0;
            Vec z = matvec(t.piped.basis.A, corner) - t.piped.offset;
            Vec u = matvec(basis.Ainv, z);
            for (int j = 0; j < d; ++j) {
                lo[j] = std::min(lo[j], u[j] - 1.0);
                hi[j] = std::max(hi[j], u[j] + 1.0);
            }
        }
    }
    std::mt19937 rng(seed);
    for (int i = 0; i < samples; ++i) {
        Vec n(d);
        for (int j = 0; j < d; ++j) {
            double span = hi[j] - lo[j];
            n[j] = std::floor(lo[j]) + static_cast<double>(rng() % (std::uint32_t)(span + 2));
        }
        int ind = g.indicator(matvec(basis.A, n));
        if (ind != 0 && ind != 1) return false;
    }
    return true;
}

}  // namespace latticezeta
