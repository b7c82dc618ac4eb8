#pragma once

#include <stdexcept>
#include <string>

namespace knds {

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters that do not describe a sub-extremal KN-dS exterior.
class InadmissibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solver failure: non-convergence, step underflow, bracketing failure.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a map (e.g. radius beyond a horizon).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace knds
