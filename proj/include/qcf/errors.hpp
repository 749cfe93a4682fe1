#pragma once

#include <stdexcept>
#include <string>

namespace qcf {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (x = 0, point on a branch cut, ...).
class domain_error : public error {
public:
    using error::error;
};

// Invalid or inconsistent parameters (|q| >= 1, lower parameter on q^{-N}, ...).
class parameter_error : public error {
public:
    using error::error;
};

// A series was asked to converge where it cannot (r > s+1, |x| >= 1 at r = s+1).
class divergence_error : public error {
public:
    using error::error;
};

// Adaptive truncation hit its cap before the stopping rule fired.
class convergence_error : public error {
public:
    using error::error;
};

// Evaluation point lies within the guard band of an excluded q-spiral.
// The message names the spiral, e.g. "[1;q]" or "[-lambda;q]".
class spiral_error : public error {
public:
    using error::error;
};

// A pole of the function sits within guard distance (theta zero in a
// denominator, q-gamma pole, pole of the Borel image g).
class pole_error : public error {
public:
    using error::error;
};

// Parameter degeneracy, e.g. b/a on q^Z where connection constants blow up.
class degeneracy_error : public error {
public:
    using error::error;
};

} // namespace qcf
