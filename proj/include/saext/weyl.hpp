#pragma once

// gamma-fields, Weyl functions, the Cayley transform B(lambda) and the Krein
// resolvent formula for T_U.
//
// Every gamma-field is computed by one solver: find x in ker(T* - lambda) with
// F x = phi for a boundary functional F (Gamma0, Gamma_+ or Gamma_-).

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "triplets.hpp"

namespace saext {

enum class Functional { gamma0, gamma1, gamma_plus, gamma_minus };

inline char const* to_string(Functional f) {
    switch (f) {
    case Functional::gamma0: return "Gamma0";
    case Functional::gamma1: return "Gamma1";
    case Functional::gamma_plus: return "Gamma_+";
    case Functional::gamma_minus: return "Gamma_-";
    }
    return "?";
}

inline ComplexMatrix functional_matrix(BoundaryTriplet const& tr, Functional f) {
    switch (f) {
    case Functional::gamma0: return tr.gamma0;
    case Functional::gamma1: return tr.gamma1;
    case Functional::gamma_plus: return tr.gamma_plus();
    case Functional::gamma_minus: return tr.gamma_minus();
    }
    return tr.gamma0;
}

namespace detail {

/// Block owning the largest share of a kernel vector of F D_lambda.
inline std::size_t offending_block(ModelOperator const& model, ComplexMatrix const& fd) {
    Eigen::JacobiSVD<ComplexMatrix> svd(fd, Eigen::ComputeFullV);
    ComplexVector const v = svd.matrixV().col(fd.cols() - 1);
    std::size_t best = 0;
    double best_w = -1.0;
    std::size_t const per = model.block_deficiency();
    for (std::size_t k = 0; k < model.blocks(); ++k) {
        double w = 0.0;
        for (std::size_t r = 0; r < per; ++r) w += std::norm(v(static_cast<Eigen::Index>(k * per + r)));
        if (w > best_w) {
            best_w = w;
            best = k;
        }
    }
    return best;
}

} // namespace detail

/// Coefficients C (m x m) such that the columns of deficiency_basis(lambda) * C
/// are gamma_F(lambda) e_j. Throws SpectrumHit when F restricted to
/// ker(T* - lambda) is singular (lambda is an eigenvalue of ker F).
inline ComplexMatrix gamma_coefficients(BoundaryTriplet const& tr, cplx lambda, Functional f,
                                        Tolerances const& tol = default_tolerances()) {
    auto const k = deficiency_basis(tr.model, lambda);
    ComplexMatrix const fm = functional_matrix(tr, f);
    ComplexMatrix const bd = boundary_matrix(k);
    ComplexMatrix const fd = fm * bd;
    RealVector const s = singular_values(fd);
    double const scale = std::max(s(0), norm2(fm) * norm2(bd));
    if (!(s(s.size() - 1) > tol.rank * scale)) {
        std::size_t const b = detail::offending_block(tr.model, fd);
        throw SpectrumHit(std::string("gamma-field: lambda is an eigenvalue of ker ") + to_string(f) + " on block " +
                              std::to_string(b),
                          b);
    }
    return fd.fullPivLu().solve(ComplexMatrix::Identity(fd.rows(), fd.cols()));
}

/// gamma_F(lambda) e_j for j = 1..m.
inline std::vector<DomainElement> gamma_columns(BoundaryTriplet const& tr, cplx lambda, Functional f = Functional::gamma0,
                                                Tolerances const& tol = default_tolerances()) {
    auto const k = deficiency_basis(tr.model, lambda);
    ComplexMatrix const c = gamma_coefficients(tr, lambda, f, tol);
    std::vector<DomainElement> out;
    for (Eigen::Index j = 0; j < c.cols(); ++j) out.push_back(combine(k, c.col(j)));
    return out;
}

struct GammaField {
    DomainElement x;
    double eigen_residual = 0.0;    // ||(T* - lambda) x|| / ||x||
    double boundary_residual = 0.0; // ||F x - phi||
};

/// The unique x in ker(T* - lambda) with F x = phi.
inline GammaField gamma_field(BoundaryTriplet const& tr, cplx lambda, ComplexVector const& phi,
                              Functional f = Functional::gamma0, Tolerances const& tol = default_tolerances()) {
    if (static_cast<std::size_t>(phi.size()) != tr.m()) throw StructuralError("gamma_field: phi has the wrong size");
    auto const k = deficiency_basis(tr.model, lambda);
    ComplexMatrix const c = gamma_coefficients(tr, lambda, f, tol);
    GammaField g{combine(k, c * phi), 0.0, 0.0};
    double const nx = norm_l2(g.x);
    g.eigen_residual = nx > 0.0 ? norm_l2(apply_T_star(g.x) - lambda * g.x) / nx : 0.0;
    g.boundary_residual = (functional_matrix(tr, f) * boundary_values(g.x) - phi).norm();
    return g;
}

// ---------------------------------------------------------------------------
// Weyl function

enum class Branch { none, principal_sqrt };

struct WeylSample {
    cplx lambda;
    ComplexMatrix M;
    ComplexMatrix B;                    // Cayley transform, only for Im lambda > 0
    Branch branch = Branch::none;
    double conj_symmetry_residual = 0.0; // ||M(conj lambda) - M(lambda)^H||
    double nevanlinna_min = 0.0;         // min eig of Im M / Im lambda
    double gamma_residual = 0.0;         // max eigen/boundary residual of the gamma columns
};

/// M(lambda) = Gamma1 gamma(lambda), lambda off the spectrum of ker Gamma0.
/// Throws DiagnosticFailure when conjugate symmetry or (for non-real lambda)
/// the Nevanlinna property fails.
inline WeylSample weyl_M(BoundaryTriplet const& tr, cplx lambda, Tolerances const& tol = default_tolerances()) {
    WeylSample w;
    w.lambda = lambda;
    w.branch = tr.model.first_order() ? Branch::none : Branch::principal_sqrt;
    auto const cols = gamma_columns(tr, lambda, Functional::gamma0, tol);
    ComplexMatrix const bd = boundary_matrix(cols);
    w.M = tr.gamma1 * bd;
    ComplexMatrix const id = ComplexMatrix::Identity(w.M.rows(), w.M.cols());
    w.gamma_residual = (tr.gamma0 * bd - id).norm();
    for (auto const& c : cols) {
        double const n = norm_l2(c);
        if (n > 0.0) w.gamma_residual = std::max(w.gamma_residual, norm_l2(apply_T_star(c) - lambda * c) / n);
    }

    auto const cols_bar = gamma_columns(tr, std::conj(lambda), Functional::gamma0, tol);
    ComplexMatrix const m_bar = tr.gamma1 * boundary_matrix(cols_bar);
    w.conj_symmetry_residual = norm2(m_bar - w.M.adjoint()) / std::max(1.0, norm2(w.M));
    if (!(w.conj_symmetry_residual < tol.conj_symmetry))
        throw DiagnosticFailure("weyl_M: M(conj lambda) != M(lambda)^H (residual " + std::to_string(w.conj_symmetry_residual) + ")");

    if (lambda.imag() != 0.0) {
        ComplexMatrix const im = (w.M - w.M.adjoint()) / (2.0 * I * lambda.imag());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (im + im.adjoint()), Eigen::EigenvaluesOnly);
        w.nevanlinna_min = es.eigenvalues().minCoeff();
        if (!(w.nevanlinna_min > 0.0))
            throw DiagnosticFailure("weyl_M: Im M(lambda) / Im lambda is not positive definite (min eigenvalue " +
                                    std::to_string(w.nevanlinna_min) + ")");
    }
    if (lambda.imag() > 0.0) w.B = (w.M - I * id) * (w.M + I * id).inverse();
    return w;
}

// ---------------------------------------------------------------------------

struct DerivativeCheck {
    cplx lambda;
    double h = 0.0;
    ComplexMatrix finite_difference;
    ComplexMatrix gram; // (gamma(lambda) e_j, gamma(conj lambda) e_i)
    double residual = 0.0; // ||fd - gram|| / ||gram||
};

/// Central difference of M at lambda against gamma(conj lambda)^* gamma(lambda).
/// Default step h = 1e-4 |lambda|.
inline DerivativeCheck weyl_derivative_check(BoundaryTriplet const& tr, cplx lambda, double h = 0.0,
                                             Tolerances const& tol = default_tolerances()) {
    if (lambda.imag() == 0.0) throw ContractError("weyl_derivative_check: lambda must be non-real");
    DerivativeCheck d;
    d.lambda = lambda;
    d.h = h > 0.0 ? h : 1e-4 * std::abs(lambda);
    auto weyl = [&](cplx l) {
        return ComplexMatrix(tr.gamma1 * boundary_matrix(gamma_columns(tr, l, Functional::gamma0, tol)));
    };
    d.finite_difference = (weyl(lambda + d.h) - weyl(lambda - d.h)) / (2.0 * d.h);
    auto const g = gamma_columns(tr, lambda, Functional::gamma0, tol);
    auto const gb = gamma_columns(tr, std::conj(lambda), Functional::gamma0, tol);
    d.gram = gram_l2(g, gb);
    d.residual = norm2(d.finite_difference - d.gram) / norm2(d.gram);
    return d;
}

struct CayleyB {
    cplx lambda;
    ComplexMatrix B;
    double norm = 0.0;              // ||B||_2, < 1 required
    double route_residual = 0.0;    // ||(M - i)(M + i)^{-1} - Gamma_- gamma_+||
};

/// B(lambda) = Gamma_- gamma_+(lambda) for Im lambda > 0, cross-checked against
/// the Cayley transform of M. Throws DiagnosticFailure unless ||B|| < 1.
inline CayleyB cayley_B(BoundaryTriplet const& tr, cplx lambda, Tolerances const& tol = default_tolerances()) {
    if (!(lambda.imag() > 0.0)) throw ContractError("cayley_B: Im lambda must be positive");
    CayleyB c;
    c.lambda = lambda;
    auto const gp = gamma_columns(tr, lambda, Functional::gamma_plus, tol);
    c.B = tr.gamma_minus() * boundary_matrix(gp);
    ComplexMatrix const m = tr.gamma1 * boundary_matrix(gamma_columns(tr, lambda, Functional::gamma0, tol));
    ComplexMatrix const id = ComplexMatrix::Identity(m.rows(), m.cols());
    ComplexMatrix const via_m = (m - I * id) * (m + I * id).inverse();
    c.route_residual = norm2(via_m - c.B);
    c.norm = norm2(c.B);
    if (!(c.norm < 1.0)) throw DiagnosticFailure("cayley_B: ||B(lambda)|| = " + std::to_string(c.norm) + " is not < 1");
    if (!(c.route_residual < tol.gamma * std::max(1.0, norm2(m))))
        throw DiagnosticFailure("cayley_B: Cayley transform of M disagrees with Gamma_- gamma_+ (residual " +
                                std::to_string(c.route_residual) + ")");
    return c;
}

// ---------------------------------------------------------------------------
// Resolvents

struct ResolventResult {
    DomainElement x;
    double equation_residual = 0.0; // ||(T* - lambda) x - y|| / ||y||
    double boundary_residual = 0.0; // ||Gamma_+ x|| / ||y||
    double norm_ratio = 0.0;        // ||x|| Im lambda / ||y||, <= 1 for a maximal dissipative inverse
};

/// (T_+ - lambda)^{-1} y, T_+ = T* restricted to ker Gamma_+, for Im lambda > 0.
inline ResolventResult resolvent_T_plus(BoundaryTriplet const& tr, cplx lambda, DomainElement const& y,
                                        Tolerances const& tol = default_tolerances()) {
    if (!(lambda.imag() > 0.0)) throw ContractError("resolvent_T_plus: Im lambda must be positive");
    DomainElement const xp = particular_solution(y, lambda);
    ComplexVector const phi = tr.gp(xp);
    auto const k = deficiency_basis(tr.model, lambda);
    ComplexMatrix const c = gamma_coefficients(tr, lambda, Functional::gamma_plus, tol);
    ResolventResult r{xp - combine(k, c * phi), 0.0, 0.0, 0.0};
    double const ny = norm_l2(y);
    if (ny > 0.0) {
        r.equation_residual = norm_l2(apply_T_star(r.x) - lambda * r.x - y) / ny;
        r.boundary_residual = tr.gp(r.x).norm() / ny;
        r.norm_ratio = norm_l2(r.x) * lambda.imag() / ny;
    }
    return r;
}

struct AdjointResult {
    ComplexVector value;          // gamma_-(conj lambda)^* y
    ComplexVector direct;         // same, from (y, gamma_-(conj lambda) e_j)_H
    double residual = 0.0;        // ||value - direct|| / max(1, ||value||)
};

/// gamma_-(conj lambda)^* y = -i Gamma_- (T_+ - lambda)^{-1} y, cross-checked
/// against the inner products with the gamma_- field at conj lambda.
inline AdjointResult gamma_minus_adjoint(BoundaryTriplet const& tr, cplx lambda, DomainElement const& y,
                                         Tolerances const& tol = default_tolerances()) {
    auto const res = resolvent_T_plus(tr, lambda, y, tol);
    AdjointResult a;
    a.value = -I * tr.gm(res.x);
    auto const cols = gamma_columns(tr, std::conj(lambda), Functional::gamma_minus, tol);
    DomainElement const ys[] = {y};
    a.direct = gram_l2(std::span<DomainElement const>(ys), cols).col(0);
    a.residual = (a.value - a.direct).norm() / std::max(1.0, a.value.norm());
    return a;
}

struct KreinProbe {
    cplx lambda;
    DomainElement lhs;  // (T_U - lambda)^{-1} y by a direct boundary solve
    DomainElement rhs;  // Krein formula
    double residual = 0.0; // ||lhs - rhs|| / ||y||
    double lhs_equation_residual = 0.0;
    double lhs_membership_residual = 0.0;
    double adjoint_route_residual = 0.0;
};

/// Compare (T_U - lambda)^{-1} y computed two ways:
///   direct: x = x_p + sum c_j k_j with k_j in ker(T* - lambda) and E x = 0
///   Krein:  (T_+ - lambda)^{-1} y + i gamma_+(lambda) (U - B(lambda))^{-1} gamma_-(conj lambda)^* y
inline KreinProbe krein_residual(ExtensionSpec const& ext, cplx lambda, DomainElement const& y,
                                 Tolerances const& tol = default_tolerances()) {
    if (!(lambda.imag() > 0.0)) throw ContractError("krein_residual: Im lambda must be positive");
    auto const& tr = ext.triplet;
    DomainElement const xp = particular_solution(y, lambda);
    auto const k = deficiency_basis(tr.model, lambda);
    ComplexMatrix const ed = ext.condition * boundary_matrix(k);
    ComplexVector const c = solve_checked(ed, -(ext.condition * boundary_values(xp)), tol.rank, "krein_residual(direct)");
    DomainElement lhs = xp + combine(k, c);

    auto const plus = resolvent_T_plus(tr, lambda, y, tol);
    auto const adj = gamma_minus_adjoint(tr, lambda, y, tol);
    auto const b = cayley_B(tr, lambda, tol);
    ComplexVector const phi = I * solve_checked(ext.U - b.B, adj.value, tol.rank, "krein_residual(U - B)");
    auto const kp = deficiency_basis(tr.model, lambda);
    ComplexMatrix const cp = gamma_coefficients(tr, lambda, Functional::gamma_plus, tol);
    DomainElement rhs = plus.x + combine(kp, cp * phi);

    KreinProbe p{lambda, lhs, rhs, 0.0, 0.0, 0.0, adj.residual};
    double const ny = norm_l2(y);
    p.residual = norm_l2(lhs - rhs) / ny;
    p.lhs_equation_residual = norm_l2(apply_T_star(lhs) - lambda * lhs - y) / ny;
    p.lhs_membership_residual = ext.membership_residual(lhs) / ny;
    return p;
}

struct Decomposition {
    DomainElement x_lambda; // x - gamma_+(lambda) phi, lies in D(T_+)
    ComplexVector phi;      // Gamma_+ x
    DomainElement y;        // part of (T* - lambda) x in Ran(T - lambda)
    DomainElement w;        // part in ker(T* - conj lambda)
    double linkage_residual = 0.0;     // ||i gamma_-(conj lambda)^* w - (U - B) phi||
    double reassembly_residual = 0.0;  // ||(T_+ - lambda)^{-1}(y + w) + gamma_+ phi - x|| / ||x||
    double range_residual = 0.0;       // ||Gamma0 v|| + ||Gamma1 v||, v = (T_+ - lambda)^{-1} y, over ||y||
    double membership_residual = 0.0;  // of the input x
};

/// Splits x in D(T_U) along D(T_+) + ker(T* - lambda), and (T* - lambda) x along
/// Ran(T - lambda) + ker(T* - conj lambda).
inline Decomposition domain_decompose(ExtensionSpec const& ext, cplx lambda, DomainElement const& x,
                                      Tolerances const& tol = default_tolerances()) {
    if (!(lambda.imag() > 0.0)) throw ContractError("domain_decompose: Im lambda must be positive");
    auto const& tr = ext.triplet;
    double const nx = norm_l2(x);
    double const memb = ext.membership_residual(x) / std::max(1.0, nx);
    if (!(memb < tol.membership))
        throw ContractError("domain_decompose: x is not in D(T_U) (residual " + std::to_string(memb) + ")");

    ComplexVector const phi = tr.gp(x);
    auto const kp = deficiency_basis(tr.model, lambda);
    DomainElement const z = combine(kp, gamma_coefficients(tr, lambda, Functional::gamma_plus, tol) * phi);
    DomainElement const f = apply_T_star(x) - lambda * x;

    auto const kb = deficiency_basis(tr.model, std::conj(lambda));
    DomainElement const fs[] = {f};
    ComplexMatrix const g = gram_l2(kb);
    ComplexVector const rhs = gram_l2(std::span<DomainElement const>(fs), kb).col(0);
    ComplexVector const a = solve_checked(g, rhs, tol.rank, "domain_decompose(projection)");
    DomainElement const w = combine(kb, a);
    DomainElement const y = f - w;

    Decomposition d{x - z, phi, y, w, 0.0, 0.0, 0.0, memb};
    auto const b = cayley_B(tr, lambda, tol);
    auto const adj_w = gamma_minus_adjoint(tr, lambda, w, tol);
    d.linkage_residual = (I * adj_w.value - (ext.U - b.B) * phi).norm() / std::max(1.0, phi.norm());
    auto const back = resolvent_T_plus(tr, lambda, y + w, tol);
    d.reassembly_residual = norm_l2(back.x + z - x) / std::max(1e-300, nx);
    double const ny = norm_l2(y);
    if (ny > 0.0) {
        auto const v = resolvent_T_plus(tr, lambda, y, tol);
        d.range_residual = (tr.g0(v.x).norm() + tr.g1(v.x).norm()) / ny;
    }
    return d;
}

} // namespace saext
