#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace latticezeta {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error("pole error: " + msg) {}
};

// Adaptive quadrature ran out of intervals; carries the best estimate.
struct BudgetExceeded : Error {
    std::complex<double> estimate;
    double err_bound;
    BudgetExceeded(std::complex<double> est, double err)
        : Error("quadrature interval budget exceeded"), estimate(est), err_bound(err) {}
};

struct FitFailed : Error {
    explicit FitFailed(const std::string& msg) : Error("monomial fit failed: " + msg) {}
};

struct SeriesNotConverged : Error {
    explicit SeriesNotConverged(const std::string& msg) : Error("series not converged: " + msg) {}
};

struct OffsetOnLattice : Error {
    explicit OffsetOnLattice(const std::string& msg) : Error("offset on lattice: " + msg) {}
};

struct IncompatibleScale : Error {
    explicit IncompatibleScale(const std::string& msg) : Error("incompatible scale: " + msg) {}
};

struct NoFeasibleC : Error {
    explicit NoFeasibleC(const std::string& msg) : Error("no feasible contour radius: " + msg) {}
};

struct PrecisionLoss : Error {
    explicit PrecisionLoss(const std::string& msg) : Error("precision loss: " + msg) {}
};

struct SingularWaveVector : Error {
    explicit SingularWaveVector(const std::string& msg)
        : Error("wave vector on singular support: " + msg) {}
};

struct TailTooLarge : Error {
    double bound;
    TailTooLarge(const std::string& msg, double b)
        : Error("truncation tail bound too large: " + msg), bound(b) {}
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_) : Error("parse error: " + msg), line(line_) {}
};

}  // namespace latticezeta
