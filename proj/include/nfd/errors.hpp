#pragma once

#include <stdexcept>
#include <string>

namespace nfd {

/// Argument outside the domain of a formula (nonpositive frequency, negative
/// temperature, unsupported material for an asymptotic form, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quantity that is genuinely infinite for the given inputs, e.g. the
/// evanescent spectral density of a conductor at d = 0.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Time grid too coarse for the requested (omega, k).
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach its tolerance. Carries the best
/// estimate and the error bound at the point of failure.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double bound)
        : std::runtime_error(what), estimate_(estimate), bound_(bound) {}

    double estimate() const noexcept { return estimate_; }
    double bound() const noexcept { return bound_; }

private:
    double estimate_;
    double bound_;
};

} // namespace nfd
