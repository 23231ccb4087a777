#pragma once
// Error taxonomy shared by the library and the CLI. Each class maps to one
// machine-readable kind string so the CLI can emit structured errors.

#include <stdexcept>
#include <string>

namespace ued {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// Malformed input file content (bad line, bad token, non-finite number).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse", msg) {}
};

// Structurally well-formed input that violates a contract (duplicate ids,
// unknown references, missing coverage, dimension mismatch).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

// Inconsistent or incomplete configuration (unset alpha/beta, flag clashes,
// missing upstream artifacts).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

// A solve was requested on an instance that admits no feasible solution.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error("infeasible", msg) {}
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& msg) : Error("divergence", msg) {}
};

}  // namespace ued
