#pragma once

#include <stdexcept>
#include <string>

namespace divlab {

/// Base class for all divlab errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unknown identifier in a registry.
struct lookup_error final : error {
    using error::error;
};

/// A function failed a structural requirement (e.g. Phi-membership).
struct validation_error final : error {
    using error::error;
};

/// A function cannot supply a required derivative order.
struct capability_error final : error {
    using error::error;
};

/// Linear system too ill-conditioned to solve reliably.
struct conditioning_error final : error {
    using error::error;
};

/// Iteration failed to converge (e.g. Remez exchange stagnation).
struct convergence_error final : error {
    using error::error;
};

/// Quadrature could not reach the requested tolerance.
struct accuracy_error final : error {
    accuracy_error(const std::string& what, double achieved_bound)
        : error(what), achieved(achieved_bound) {}
    double achieved;
};

/// Malformed configuration or baseline input.
struct config_error final : error {
    using error::error;
};

} // namespace divlab
