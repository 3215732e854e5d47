#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylip {

// Error taxonomy for the whole library. Every throwing path uses one of
// these so callers (and the CLI) can map failures onto exit codes and
// report records without string matching.
class Error : public std::runtime_error {
public:
    enum class Kind {
        Input,         // non-finite or malformed input
        Pole,          // evaluation lands on a kernel/rational pole
        Region,        // point is in the wrong region (Omega+/Gamma/Omega-)
        Proximity,     // evaluation point too close to the curve to resolve
        Convergence,   // quadrature did not converge within the panel budget
        BranchPoint,   // evaluation at a Schwarz-Christoffel prevertex
        Inversion,     // Newton inversion of the conformal map failed
        Crowding,      // prevertex gap collapsed below resolvable spacing
        Solver,        // parameter-problem solver did not converge
        Resource,      // configured size/limit exceeded
        Precondition,  // documented operation precondition violated
        Io,            // file or serialization failure
    };

    Error(Kind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline const char* to_string(Error::Kind k) {
    switch (k) {
        case Error::Kind::Input: return "input";
        case Error::Kind::Pole: return "pole";
        case Error::Kind::Region: return "region";
        case Error::Kind::Proximity: return "proximity";
        case Error::Kind::Convergence: return "convergence";
        case Error::Kind::BranchPoint: return "branch_point";
        case Error::Kind::Inversion: return "inversion";
        case Error::Kind::Crowding: return "crowding";
        case Error::Kind::Solver: return "solver";
        case Error::Kind::Resource: return "resource";
        case Error::Kind::Precondition: return "precondition";
        case Error::Kind::Io: return "io";
    }
    return "unknown";
}

// Solver failures carry the residual vector for diagnostics.
class SolverError : public Error {
public:
    SolverError(const std::string& msg, std::vector<double> residuals)
        : Error(Kind::Solver, msg), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

}  // namespace hardylip
