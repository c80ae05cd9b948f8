#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace colombeau {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mollifier moment system could not be solved or certified.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A derivative or mollifier order beyond what the library supports.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its refinement cap; carries the last estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Differential requested on a node class without a closed form (e.g. d^2).
class UnsupportedDifferential : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Grid or parameter combination rejected before computing anything.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace colombeau
