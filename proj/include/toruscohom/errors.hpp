#pragma once

#include <stdexcept>
#include <string>

namespace toruscohom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |det A| != 1: the matrix does not act on the integer lattice invertibly.
struct NotUnimodularError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

// Spectrum touches the unit circle (or root finding cannot separate it).
struct NotHyperbolicError : Error {
    using Error::Error;
};

// Splitting residuals exceed tolerance; eigenvalues too close to |lambda| = 1.
struct IllConditionedError : Error {
    using Error::Error;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

// Companion construction needs |constant term| = 1.
struct NotUnimodularPolynomialError : Error {
    using Error::Error;
};

struct ZeroFrequencyError : Error {
    using Error::Error;
};

struct ZeroVectorError : Error {
    using Error::Error;
};

struct EnumerationOverflowError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace toruscohom
