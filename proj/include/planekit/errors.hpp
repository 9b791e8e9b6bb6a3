#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace planekit {

/// Base class for every recoverable error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input (files, strings, field values). Messages name the
/// offending field where one exists.
class parse_error : public error {
public:
    using error::error;
};

/// A construction received a value its invariant forbids (zero wedge
/// constant, asymmetric Gram matrix, ...).
class invalid_value : public error {
public:
    using error::error;
};

class bad_indices : public error {
public:
    using error::error;
};

class too_short : public error {
public:
    using error::error;
};

class degenerate_line : public error {
public:
    using error::error;
};

class missing_negation : public error {
public:
    using error::error;
};

class singular_matrix : public error {
public:
    using error::error;
};

class singular_generator : public error {
public:
    using error::error;
};

class incomplete_closure : public error {
public:
    using error::error;
};

class not_positive_definite : public error {
public:
    using error::error;
};

class not_traceless : public error {
public:
    using error::error;
};

class irrational_normalizer : public error {
public:
    using error::error;
};

class dimension_mismatch : public error {
public:
    using error::error;
};

/// Boundedness screen rejected the group a synthesizer was asked to use.
class screen_failed : public error {
public:
    explicit screen_failed(const std::string& reason)
        : error("boundedness screen rejected the group: " + reason), reason_(reason) {}
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

/// Fixed-point iteration hit its step budget with the residual still above
/// tolerance.
class no_convergence : public error {
public:
    no_convergence(std::size_t iterations, double residual)
        : error("no convergence after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}
    std::size_t iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

} // namespace planekit
