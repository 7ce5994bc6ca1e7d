#ifndef GEOFLOW_ERRORS_HPP
#define GEOFLOW_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoflow {

/// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax or validation error in expression text. Carries the byte offset
/// of the offending token within the input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Division by an identically-zero polynomial.
class ZeroDenominator : public Error {
public:
    using Error::Error;
};

/// Exact evaluation hit a pole: the denominator vanishes at the point.
/// Signals the point is outside the chart's regular locus.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Mismatched or unknown variables between operands.
class VariableError : public Error {
public:
    using Error::Error;
};

/// Metric degeneracy, isotropic planes, points outside a chart guard.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-convergent solver, rank-deficient Jacobian.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Model file schema violation. `where` is a JSON-pointer-like path.
class ModelError : public Error {
public:
    ModelError(const std::string& what, const std::string& where)
        : Error(what + " [" + where + "]"), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

} // namespace geoflow

#endif
