#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitfem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad mesh sizes, non-positive heights, non-finite input.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A banded system could not be solved (singular or numerically singular).
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double diagnostic)
        : Error(what), diagnostic_(diagnostic) {}
    /// Solver-specific measure of how close the system is to singular.
    double diagnostic() const noexcept { return diagnostic_; }

private:
    double diagnostic_;
};

/// Fixed-point iteration of the implicit midpoint rule did not converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// The state became non-finite during time stepping.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, std::size_t step) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Dispersion measurement failed: the probed Fourier mode is not invariant.
class AnalysisError : public Error {
public:
    AnalysisError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace splitfem
