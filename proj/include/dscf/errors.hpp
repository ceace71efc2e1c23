#ifndef DSCF_ERRORS_HPP
#define DSCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dscf {

// Base class for everything this library throws on purpose. The CLI maps
// these to exit code 2; anything else is a bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

struct BadShape : Error {
    explicit BadShape(const std::string& msg) : Error(msg) {}
};

// Cholesky hit a non-positive pivot. Callers should raise regularization
// (alpha, gamma or the diagonal guard) and retry.
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

struct Diverged : Error {
    explicit Diverged(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(std::size_t row, const std::string& msg)
        : Error("row " + std::to_string(row) + ": " + msg), row(row) {}
    std::size_t row;
};

struct EmptyDataset : Error {
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

struct NotEnoughClasses : Error {
    explicit NotEnoughClasses(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace dscf

#endif  // DSCF_ERRORS_HPP
