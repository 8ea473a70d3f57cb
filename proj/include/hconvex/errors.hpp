#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hconvex {

/// Invalid argument to a library call (index out of range, bad grid size, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix (or the operator A[phi] at some node) left the positive cone.
class ConeViolation : public std::runtime_error {
public:
    ConeViolation(const std::string& what, double min_eigenvalue, std::ptrdiff_t node = -1)
        : std::runtime_error(what), min_eigenvalue_(min_eigenvalue), node_(node) {}

    [[nodiscard]] double min_eigenvalue() const noexcept { return min_eigenvalue_; }
    /// Offending grid node, or -1 when the violation is not tied to a grid.
    [[nodiscard]] std::ptrdiff_t node() const noexcept { return node_; }

private:
    double min_eigenvalue_;
    std::ptrdiff_t node_;
};

/// Inconsistent geometric input: degenerate metric, point outside all horoballs.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hconvex
