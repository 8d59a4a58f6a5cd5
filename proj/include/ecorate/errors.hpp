#pragma once

#include <stdexcept>
#include <string>

namespace ecorate {

/// Base class for all recoverable ecorate errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or malformed input data (CSV rows, out-of-range values,
/// datasets that are too small). CLI exit code 1.
class input_error : public error {
public:
    explicit input_error(const std::string& msg) : error(msg) {}
};

/// Malformed text input; carries the 1-based line number.
class parse_error : public input_error {
public:
    parse_error(const std::string& msg, std::size_t line)
        : input_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A robust estimate could not be formed because the points carry no
/// geometric information (all equal, all collinear).
class degenerate_geometry_error : public input_error {
public:
    explicit degenerate_geometry_error(const std::string& msg) : input_error(msg) {}
};

/// Numerical solver did not converge within its iteration budget.
/// CLI exit code 2.
class solver_error : public error {
public:
    explicit solver_error(const std::string& msg) : error(msg) {}
};

/// Bad configuration: unknown keys, invalid flag combinations,
/// out-of-domain settings. CLI exit code 3.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

/// Internal invariant broke; indicates a bug, not bad user input.
class contract_violation : public std::logic_error {
public:
    explicit contract_violation(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace ecorate
