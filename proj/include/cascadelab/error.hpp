#ifndef CASCADELAB_ERROR_HPP
#define CASCADELAB_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cascadelab {

// Invalid arguments or violated preconditions.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Power iteration did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// RandomGroup seeding asked for more seeds than the group holds.
class InsufficientGroupError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Not enough observations in the fitting window.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A message id requested from a log that does not contain it.
class UnknownMessageError : public std::out_of_range {
public:
    explicit UnknownMessageError(const std::string& id)
        : std::out_of_range("unknown message id: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

// Malformed input; line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace cascadelab

#endif  // CASCADELAB_ERROR_HPP
