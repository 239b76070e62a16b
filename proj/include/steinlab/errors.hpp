#pragma once

#include <stdexcept>
#include <string>

namespace steinlab {

// All failures carry the module and operation that raised them so the CLI
// can report provenance and map to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string op, const std::string& what)
        : std::runtime_error(module + "." + op + ": " + what),
          module_(std::move(module)),
          op_(std::move(op)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& op() const noexcept { return op_; }

private:
    std::string module_;
    std::string op_;
};

// Dimension mismatch between operands, or a tensor power exceeding the cap.
class DimensionError : public Error {
public:
    using Error::Error;
};

// State too close to singular for a log / negative power in strict mode.
class SingularStateError : public Error {
public:
    using Error::Error;
};

// Operands required to commute do not, within tolerance.
class CommutativityError : public Error {
public:
    CommutativityError(std::string module, std::string op, const std::string& what,
                       double max_commutator_norm)
        : Error(std::move(module), std::move(op), what),
          max_commutator_norm_(max_commutator_norm) {}

    double max_commutator_norm() const noexcept { return max_commutator_norm_; }

private:
    double max_commutator_norm_;
};

// Eigenvalue clustering could not be resolved (coincident gaps, repeated
// generic coefficients, failed invariance checks).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// Caller violated a documented precondition (range, ordering, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Fock-space truncation too small; carries a suggestion.
class CutoffError : public Error {
public:
    CutoffError(std::string module, std::string op, const std::string& what,
                int suggested_cutoff)
        : Error(std::move(module), std::move(op), what),
          suggested_cutoff_(suggested_cutoff) {}

    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    int suggested_cutoff_;
};

// Bad experiment configuration (CLI / config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace steinlab
