#pragma once

#include <stdexcept>
#include <string>

namespace sfhf {

/// Base of every numerical failure raised by the library.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No vertical contour separates the left and right pole clusters.
class PoleSeparationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Quadrature did not reach its tolerance, or the integrand does not decay.
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Residue series terms grow instead of shrinking.
class DivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Two left poles coincide (higher-order pole) in the residue path.
class PoleCollisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Real-part extraction left a large imaginary residue.
class BranchAmbiguityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A gamma function argument sits on a nonpositive integer.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid model or configuration parameters.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a mapping.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Perfect I/Q matching has an infinite image rejection ratio.
class InfiniteIrr : public DomainError {
public:
    InfiniteIrr() : DomainError("image rejection ratio is infinite for perfect I/Q matching") {}
};

/// Ideal hardware has no capacity ceiling.
class InfiniteCeiling : public DomainError {
public:
    InfiniteCeiling() : DomainError("capacity ceiling is infinite for ideal hardware") {}
};

}  // namespace sfhf
