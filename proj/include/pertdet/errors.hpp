#pragma once

#include <stdexcept>
#include <string>

#include "pertdet/types.hpp"

namespace pertdet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition on a scalar or matrix argument.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A result would not be representable as a finite double.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Two algebraically equal routes disagreed beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// lambda lies (numerically) in the spectrum, so lambda - A is not invertible.
class SingularResolvent : public Error {
public:
    SingularResolvent(cplx lambda, double s_min, double threshold);

    cplx lambda() const noexcept { return lambda_; }
    double s_min() const noexcept { return s_min_; }

private:
    cplx lambda_;
    double s_min_;
};

/// The perturbation determinant (numerically) vanishes on a contour sample.
class ContourThroughZero : public Error {
public:
    ContourThroughZero(cplx at, double modulus);

    cplx at() const noexcept { return at_; }

private:
    cplx at_;
};

}  // namespace pertdet
