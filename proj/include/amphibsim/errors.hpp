#pragma once

#include <stdexcept>
#include <string>

namespace amphibsim {

// Bad physical inputs or parameter sets (non-finite state, negative mass, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file problems: unknown keys, unparsable values, violated ranges.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures inside the integrator (step underflow, step budget, NaN).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace amphibsim
