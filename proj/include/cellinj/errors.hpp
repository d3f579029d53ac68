#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "cellinj/format.hpp"

namespace cellinj {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (non-positive mass, negative time, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A matrix whose determinant is below the singularity threshold was asked for its inverse.
class SingularError : public Error {
public:
    explicit SingularError(double det)
        : Error("singular matrix: |det| = " + format_shortest(std::abs(det)) + " below threshold"), det_(det) {}
    double determinant() const noexcept { return det_; }

private:
    double det_;
};

/// The integrator produced a state component beyond the overflow bound.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Scenario config could not be parsed. Carries the offending line (1-based, 0 when
/// the problem is not tied to a line) and key.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string key, const std::string& what)
        : Error(format(line, key, what)), line_(line), key_(std::move(key)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    static std::string format(std::size_t line, const std::string& key, const std::string& what) {
        std::string msg = "line " + std::to_string(line);
        if (!key.empty()) msg += ", key '" + key + "'";
        return msg + ": " + what;
    }

    std::size_t line_;
    std::string key_;
};

class UnknownProperty : public Error {
public:
    explicit UnknownProperty(const std::string& id) : Error("unknown property id: " + id) {}
};

}  // namespace cellinj
