#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccr {

/// Base of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (k > n for Stirling numbers, q = 1, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Binary operation on polynomials tagged with different bases.
class basis_mismatch : public error {
public:
    using error::error;
};

class unsupported_operation : public error {
public:
    using error::error;
};

/// A result would exceed the caller-supplied truncation degree.
class overflow_error : public error {
public:
    using error::error;
};

/// Operator exponential whose series does not terminate on the truncated space.
class nontermination_error : public error {
public:
    using error::error;
};

/// Inverse of a diagonal operator with a zero eigenvalue on an occupied degree.
class singular_operator : public error {
public:
    using error::error;
};

/// A checked algebraic law failed. Indicates a wiring bug or an invalid parameter.
class invariant_violation : public error {
public:
    using error::error;
};

/// Two eigenvalues of a triangular operator coincide.
class degeneracy_error : public error {
public:
    degeneracy_error(std::size_t j, std::size_t k)
        : error("degenerate eigenvalues: lambda_" + std::to_string(j) + " = lambda_" +
                std::to_string(k)),
          first_(j), second_(k) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Located syntax or semantic error from the operator language. what() is "line:col: message".
class parse_error : public error {
public:
    parse_error(std::size_t line, std::size_t column, const std::string& message)
        : error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

} // namespace ccr
