#pragma once

#include <stdexcept>
#include <string>

namespace scprop {

// det(M+1) vanishes: the center/Weyl representation is singular here.
struct CausticError : std::domain_error {
    explicit CausticError(const std::string& what) : std::domain_error(what) {}
};

// det V = 0. Cannot happen for a genuine one-degree-of-freedom symplectic
// matrix with positive-definite metric; raised only for pathological input.
struct SingularVError : std::domain_error {
    explicit SingularVError(const std::string& what) : std::domain_error(what) {}
};

// Accidental zero of det[V(M+1)] (requires simultaneous +1 and -1 eigenvalues).
struct AccidentalCausticError : std::domain_error {
    explicit AccidentalCausticError(const std::string& what) : std::domain_error(what) {}
};

// Chord-representation prefactor 1/|det(M-1)|^(1/2) diverges as M -> 1.
struct ShortTimeDivergence : std::domain_error {
    explicit ShortTimeDivergence(const std::string& what) : std::domain_error(what) {}
};

// Translation/reflection label not on the required lattice.
struct OffLattice : std::invalid_argument {
    explicit OffLattice(const std::string& what) : std::invalid_argument(what) {}
};

// Torus Weyl symbol is implemented for odd dimensions only.
struct EvenNUnsupported : std::invalid_argument {
    explicit EvenNUnsupported(const std::string& what) : std::invalid_argument(what) {}
};

// Truncated-basis computation failed its convergence/tail-mass requirement.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Brute-force search exhausted its cap without finding the object.
struct NotFound : std::runtime_error {
    explicit NotFound(const std::string& what) : std::runtime_error(what) {}
};

struct IntegerOverflow : std::overflow_error {
    explicit IntegerOverflow(const std::string& what) : std::overflow_error(what) {}
};

}  // namespace scprop
