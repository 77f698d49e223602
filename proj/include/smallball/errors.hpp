#pragma once

#include <stdexcept>
#include <string>

namespace smallball {

// A bound was requested for inputs outside the hypotheses of the statement
// it implements (e.g. the Fourier L1 bound for a model whose characteristic
// function is not integrable). Callers can usually fall back to a different
// bound; the message says which.
struct not_applicable_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Adaptive quadrature exhausted its refinement budget without meeting the
// requested tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The request is valid mathematically but outside what this implementation
// certifies (e.g. exhaustive LCD search in dimension > 3).
struct capability_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace smallball
