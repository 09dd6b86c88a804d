#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Root finding was handed an interval on which G does not change sign.
class BracketError : public Error {
public:
    using Error::Error;
};

/// A kernel integral (c(J), boundary flux) diverges for the requested kernel.
class DivergentIntegral : public Error {
public:
    using Error::Error;
};

/// Numerical tail probe could not decide between convergence and divergence.
class Undecidable : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Requested quantity does not exist for the kernel's tail class.
class UnsupportedTail : public Error {
public:
    using Error::Error;
};

/// Kernel violates the finite-speed condition; no spreading speed exists.
class NoFiniteSpeed : public Error {
public:
    using Error::Error;
};

class DegenerateAdjustment : public Error {
public:
    using Error::Error;
};

class NoCrossing : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Time step exceeds the stability bound of the explicit scheme.
class StepRejected : public Error {
public:
    using Error::Error;
};

class NonNormalizable : public Error {
public:
    using Error::Error;
};

}  // namespace frontlab
