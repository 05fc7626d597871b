#pragma once

// Dense complex linear algebra kernels. Thin, contract-checked layer over
// Eigen; every routine reports the residual it achieved.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "tolerances.hpp"

namespace saext {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

inline bool all_finite(ComplexMatrix const& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    return true;
}

/// Throws unless every entry is finite.
inline ComplexMatrix const& require_finite(ComplexMatrix const& a, char const* what) {
    if (!all_finite(a)) throw StructuralError(std::string(what) + ": matrix has non-finite entries");
    return a;
}

/// Spectral norm.
inline double norm2(ComplexMatrix const& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
inline double hermitian_norm(ComplexMatrix const& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// ||A - A^H||_2 / max(1, ||(A + A^H) / 2||_2)
inline double hermitian_residual(ComplexMatrix const& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    ComplexMatrix const skew = a - a.adjoint();
    return hermitian_norm(cplx{0.0, 1.0} * skew) / std::max(1.0, hermitian_norm(0.5 * (a + a.adjoint())));
}

inline double unitary_residual(ComplexMatrix const& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return norm2(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

inline void require_hermitian(ComplexMatrix const& a, double tol, char const* what) {
    require_finite(a, what);
    double const r = hermitian_residual(a);
    if (!(r <= tol))
        throw StructuralError(std::string(what) + ": not Hermitian (symmetry residual " +
                              std::to_string(r) + ")");
}

inline void require_unitary(ComplexMatrix const& u, double tol, char const* what) {
    require_finite(u, what);
    double const r = unitary_residual(u);
    if (!(r <= tol))
        throw StructuralError(std::string(what) + ": not unitary (||U^H U - I|| = " +
                              std::to_string(r) + ")");
}

// ---------------------------------------------------------------------------

struct OrthonormalizeResult {
    ComplexMatrix vectors;            // columns, G-orthonormal
    std::size_t rank = 0;
    std::vector<std::size_t> kept;    // input column that produced each output column
    std::vector<std::size_t> dropped; // input columns discarded as dependent
    double residual = 0.0;            // max |v_i^H G v_j - delta_ij|
};

/// Orthonormalize the columns of `vectors` in the inner product <x, y> = y^H G x.
///
/// Modified Gram-Schmidt with one reorthogonalization pass. A column whose
/// remaining G-norm falls below `drop` times its original G-norm, or whose
/// G-norm is below `drop` times the largest input norm, is discarded and reported.
inline OrthonormalizeResult gram_orthonormalize(ComplexMatrix const& vectors, ComplexMatrix const& gram,
                                                Tolerances const& tol = default_tolerances()) {
    require_finite(vectors, "gram_orthonormalize");
    if (gram.rows() != gram.cols() || gram.rows() != vectors.rows())
        throw StructuralError("gram_orthonormalize: dimension mismatch");
    require_hermitian(gram, tol.hermitian, "gram_orthonormalize");

    auto gnorm = [&](ComplexVector const& v) {
        return std::sqrt(std::max(0.0, (v.adjoint() * gram * v)(0, 0).real()));
    };

    OrthonormalizeResult out;
    double max_norm = 0.0;
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) max_norm = std::max(max_norm, gnorm(vectors.col(j)));

    std::vector<ComplexVector> basis;
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        ComplexVector v = vectors.col(j);
        double const original = gnorm(v);
        if (original <= tol.drop * max_norm || original == 0.0) {
            out.dropped.push_back(static_cast<std::size_t>(j));
            continue;
        }
        for (int pass = 0; pass < 2; ++pass)
            for (auto const& q : basis) v -= (q.adjoint() * gram * v)(0, 0) * q;
        double const remaining = gnorm(v);
        if (remaining <= tol.drop * original) {
            out.dropped.push_back(static_cast<std::size_t>(j));
            continue;
        }
        basis.push_back(v / remaining);
        out.kept.push_back(static_cast<std::size_t>(j));
    }

    out.rank = basis.size();
    out.vectors.resize(vectors.rows(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) out.vectors.col(static_cast<Eigen::Index>(k)) = basis[k];
    if (out.rank > 0) {
        ComplexMatrix const g = out.vectors.adjoint() * gram * out.vectors;
        out.residual = (g - ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    }
    return out;
}

// ---------------------------------------------------------------------------

struct PencilEig {
    RealVector values;     // ascending
    ComplexMatrix vectors; // B-orthonormal columns
    double residual = 0.0; // max_j ||A v - l B v|| / (||A|| + |l| ||B||)
    double b_orthonormality = 0.0;
};

/// Generalized Hermitian eigenproblem A v = lambda B v with B positive definite.
inline PencilEig hermitian_pencil_eig(ComplexMatrix const& a, ComplexMatrix const& b,
                                      Tolerances const& tol = default_tolerances()) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw StructuralError("hermitian_pencil_eig: dimension mismatch");
    require_hermitian(a, tol.hermitian, "hermitian_pencil_eig(A)");
    require_hermitian(b, tol.hermitian, "hermitian_pencil_eig(B)");

    ComplexMatrix const ah = 0.5 * (a + a.adjoint());
    ComplexMatrix const bh = 0.5 * (b + b.adjoint());

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> bs(bh, Eigen::EigenvaluesOnly);
    double const bmin = bs.eigenvalues().minCoeff();
    double const bmax = bs.eigenvalues().maxCoeff();
    if (!(bmin > tol.pencil_pd * bmax) || !(bmax > 0.0))
        throw StructuralError("hermitian_pencil_eig: B not positive definite (eigenvalue " +
                              std::to_string(bmin) + ", max " + std::to_string(bmax) + ")");

    Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> es(ah, bh, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw StructuralError("hermitian_pencil_eig: solver failed");

    PencilEig out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    double const na = hermitian_norm(ah), nb = bmax;
    for (Eigen::Index j = 0; j < out.values.size(); ++j) {
        double const l = out.values(j);
        ComplexVector const v = out.vectors.col(j);
        double const r = (ah * v - l * (bh * v)).norm() / ((na + std::abs(l) * nb) * std::max(v.norm(), 1e-300));
        out.residual = std::max(out.residual, r);
    }
    ComplexMatrix const g = out.vectors.adjoint() * bh * out.vectors;
    out.b_orthonormality = (g - ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    return out;
}

// ---------------------------------------------------------------------------

/// Singular values, nonincreasing; min(rows, cols) of them.
inline RealVector singular_values(ComplexMatrix const& a) {
    if (a.size() == 0) return RealVector(0);
    require_finite(a, "singular_values");
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues();
}

struct NullspaceResult {
    ComplexMatrix basis;   // orthonormal columns
    double residual = 0.0; // max ||A v|| / ||A||
    double sigma_max = 0.0;
};

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is <= tol * sigma_max (plus the trailing ones when cols > rows).
inline NullspaceResult nullspace(ComplexMatrix const& a, double tol = default_tolerances().rank) {
    if (!(tol > 0.0 && tol < 1.0)) throw ContractError("nullspace: tol must lie in (0, 1)");
    require_finite(a, "nullspace");
    NullspaceResult out;
    auto const n = a.cols();
    if (n == 0) return out;
    if (a.rows() == 0) {
        out.basis = ComplexMatrix::Identity(n, n);
        return out;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
    RealVector const s = svd.singularValues();
    out.sigma_max = s.size() ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * out.sigma_max) ++rank;
    out.basis = svd.matrixV().rightCols(n - rank);
    if (out.basis.cols() > 0 && out.sigma_max > 0.0)
        out.residual = (a * out.basis).colwise().norm().maxCoeff() / out.sigma_max;
    return out;
}

/// Numerical rank with the shared threshold; `ambiguous` when a singular value
/// sits within a factor 10 of the threshold.
struct RankInfo {
    std::size_t rank = 0;
    bool ambiguous = false;
    RealVector sigma;
};

inline RankInfo numerical_rank(ComplexMatrix const& a, double tol = default_tolerances().rank,
                               bool absolute = false) {
    RankInfo out;
    out.sigma = singular_values(a);
    if (out.sigma.size() == 0) return out;
    double const thr = absolute ? tol : tol * out.sigma(0);
    for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
        double const s = out.sigma(i);
        if (s > thr) ++out.rank;
        if (s > thr / 10.0 && s < thr * 10.0) out.ambiguous = true;
    }
    return out;
}

// ---------------------------------------------------------------------------

/// e^{iA} for Hermitian A, through the eigendecomposition A = V diag(mu) V^H.
inline ComplexMatrix unitary_exp(ComplexMatrix const& a, Tolerances const& tol = default_tolerances()) {
    require_hermitian(a, tol.hermitian, "unitary_exp");
    if (a.rows() == 0) return a;
    ComplexMatrix const ah = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ah);
    ComplexVector phases(ah.rows());
    for (Eigen::Index i = 0; i < ah.rows(); ++i) phases(i) = std::exp(I * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Solve a square system, refusing near-singular matrices.
inline ComplexMatrix solve_checked(ComplexMatrix const& a, ComplexMatrix const& rhs, double tol, char const* what) {
    RealVector const s = singular_values(a);
    if (s.size() == 0) return ComplexMatrix(0, rhs.cols());
    if (!(s(s.size() - 1) > tol * s(0)))
        throw StructuralError(std::string(what) + ": singular system (sigma_min/sigma_max = " +
                              std::to_string(s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0) + ")");
    return a.fullPivLu().solve(rhs);
}

} // namespace saext
