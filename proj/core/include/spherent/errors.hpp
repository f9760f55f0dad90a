#pragma once

#include <stdexcept>
#include <string>

namespace spherent {

/// Base class for every numerical failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation supports.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An intermediate or final magnitude left the representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure (series truncation, root refinement) did not settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Evaluation too close to a pole of a meromorphic quantity.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented invariant of a domain type.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// A regime-specific formula was requested outside the regime it describes.
class RegimeError : public Error {
public:
    using Error::Error;
};

}  // namespace spherent
