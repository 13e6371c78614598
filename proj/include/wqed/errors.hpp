#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

/// Raised for parameter sets that cannot describe a physical chain.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot deliver a result at the requested accuracy
/// (singular Green matrix, degenerate poles, non-convergent quadrature, ...).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A target transmission that the spectrum never reaches on the requested side.
class UnreachableTarget : public NumericalFailure {
public:
    UnreachableTarget(const std::string& what, double extremum)
        : NumericalFailure(what), extremum_(extremum) {}

    /// Transmission extremum actually achieved inside the scan window.
    double extremum() const noexcept { return extremum_; }

private:
    double extremum_;
};

}  // namespace wqed
