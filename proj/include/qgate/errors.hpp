#pragma once

#include <stdexcept>
#include <string>

namespace qgate {

// An operation that requires an even pulse (or a sigma_y-free exponent) was
// given input violating that symmetry.
class SymmetryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The ODE driver or a quadrature rule could not meet its accuracy contract.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No analytic seed exists in the scanned parameter range.
class SeedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A perturbative parameter solve has no admissible root.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A gate plan cannot be built from the available pulse library.
class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qgate
