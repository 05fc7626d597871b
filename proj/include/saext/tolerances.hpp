#pragma once

namespace saext {

/// Every numerical threshold used by the library, in one place.
///
/// Operations take a `Tolerances const&` (defaulting to `default_tolerances()`)
/// and report the residual they actually achieved next to the threshold.
struct Tolerances {
    double hermitian = 1e-10;       // symmetry residual accepted as Hermitian
    double unitary = 1e-10;         // ||U^H U - I|| accepted as unitary
    double pencil_pd = 1e-12;       // min eig(B) / max eig(B) for a definite pencil
    double pencil_residual = 1e-8;  // A v = lambda B v relative residual
    double rank = 1e-9;             // kernel / rank threshold relative to sigma_max
    double orthonormal = 1e-10;     // v_i^H G v_j = delta_ij
    double drop = 1e-10;            // relative norm below which a vector is dropped
    double green = 1e-10;           // Green identity residual
    double gamma = 1e-10;           // gamma-field boundary / eigen residual
    double conj_symmetry = 1e-10;   // M(conj lambda) = M(lambda)^H
    double weyl_derivative = 1e-6;  // M'(lambda) = gamma(conj lambda)^* gamma(lambda)
    double krein = 1e-8;            // Krein resolvent formula residual
    double annihilation = 1e-8;     // gamma_-(conj lambda)^* on Ran(T - lambda)
    double membership = 1e-8;       // domain membership residual
    double eigen_imag = 1e-8;       // |Im| of reported eigenvalues
    double galerkin_cond = 1e12;    // max condition number of the Galerkin mass matrix
    double root = 1e-12;            // relative bisection width for eigencondition roots
    double phase_singular = 1e-14;  // |denominator| of the block phase formula
    double count_tie = 1e-12;       // relative slack when counting |lambda| <= Lambda
};

inline Tolerances const& default_tolerances() {
    static Tolerances const tol{};
    return tol;
}

} // namespace saext
