#pragma once

// Boundary triplets (G, Gamma0, Gamma1) for the model operators and the
// self-adjoint extensions they parameterize:
//
//   D(T_U) = { x : (Id - U) Gamma1 x = i (Id + U) Gamma0 x }
//          = { x : Gamma_- x = U Gamma_+ x },   Gamma_+- = (Gamma1 +- i Gamma0) / sqrt(2).
//
// Gamma0 and Gamma1 are stored as m x d matrices acting on the concatenated
// boundary values of a DomainElement (see boundary_values()).

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "models.hpp"

namespace saext {

enum class TripletKind { standard, regularized, scaled };

struct BoundaryTriplet {
    ModelOperator model;
    ComplexMatrix gamma0; // m x d
    ComplexMatrix gamma1; // m x d
    std::vector<double> scales; // r_k per block: Gamma0 -> r Gamma0, Gamma1 -> Gamma1 / r
    TripletKind kind = TripletKind::standard;
    double certified_green_residual = 0.0;

    std::size_t m() const { return static_cast<std::size_t>(gamma0.rows()); }

    ComplexMatrix gamma_plus() const { return (gamma1 + I * gamma0) / std::sqrt(2.0); }
    ComplexMatrix gamma_minus() const { return (gamma1 - I * gamma0) / std::sqrt(2.0); }

    ComplexVector g0(DomainElement const& x) const { return gamma0 * boundary_values(x); }
    ComplexVector g1(DomainElement const& x) const { return gamma1 * boundary_values(x); }
    ComplexVector gp(DomainElement const& x) const { return gamma_plus() * boundary_values(x); }
    ComplexVector gm(DomainElement const& x) const { return gamma_minus() * boundary_values(x); }
};

// ---------------------------------------------------------------------------
// Green identity

/// |(T*x, y) - (x, T*y) - (Gamma1 x, Gamma0 y) + (Gamma0 x, Gamma1 y)|
inline double green_residual(BoundaryTriplet const& tr, DomainElement const& x, DomainElement const& y) {
    auto const tx = apply_T_star(x);
    auto const ty = apply_T_star(y);
    cplx const lhs = inner_l2(tx, y) - inner_l2(x, ty);
    cplx const rhs = tr.g0(y).dot(tr.g1(x)) - tr.g1(y).dot(tr.g0(x)); // Eigen dot conjugates the left operand
    return std::abs(lhs - rhs);
}

/// Indefinite form {(p0, p1), (q0, q1)} = -i [(p1, q0) - (p0, q1)] on G + G.
inline cplx indefinite_form(ComplexVector const& p0, ComplexVector const& p1, ComplexVector const& q0, ComplexVector const& q1) {
    return -I * (q0.dot(p1) - q1.dot(p0));
}

struct GreenReport {
    double max_residual = 0.0;
    std::size_t worst_i = 0, worst_j = 0; // indices into the tested element list
    double rotated_max_residual = 0.0;    // same identity written with Gamma_+-
    std::vector<cplx> form_samples;       // {(G0 x_j, G1 x_j), (G0 x_i, G1 x_i)} for the first pairs
    std::size_t pairs = 0;
};

/// Green identity on every ordered pair of `xs`, in both the (Gamma0, Gamma1) and Gamma_+- forms.
inline GreenReport green_report(BoundaryTriplet const& tr, std::span<DomainElement const> xs) {
    GreenReport r;
    if (xs.empty()) return r;
    auto const tx = apply_T_star(xs);
    std::span<DomainElement const> const txs(tx);
    // L(i, j) = (T* x_j, x_i) - (x_j, T* x_i)
    ComplexMatrix const lhs = gram_l2(txs, xs) - gram_l2(xs, txs);
    ComplexMatrix const bd = boundary_matrix(xs);
    ComplexMatrix const a0 = tr.gamma0 * bd, a1 = tr.gamma1 * bd;
    ComplexMatrix const rhs = a0.adjoint() * a1 - a1.adjoint() * a0;
    ComplexMatrix const ap = tr.gamma_plus() * bd, am = tr.gamma_minus() * bd;
    ComplexMatrix const rot = I * (ap.adjoint() * ap) - I * (am.adjoint() * am);
    for (Eigen::Index i = 0; i < lhs.rows(); ++i)
        for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
            double const res = std::abs(lhs(i, j) - rhs(i, j));
            if (res > r.max_residual) {
                r.max_residual = res;
                r.worst_i = static_cast<std::size_t>(i);
                r.worst_j = static_cast<std::size_t>(j);
            }
            r.rotated_max_residual = std::max(r.rotated_max_residual, std::abs(lhs(i, j) - rot(i, j)));
        }
    r.pairs = static_cast<std::size_t>(lhs.size());
    for (Eigen::Index j = 0; j < std::min<Eigen::Index>(4, a0.cols()); ++j) {
        Eigen::Index const i = (j + 1) % a0.cols();
        r.form_samples.push_back(indefinite_form(a0.col(j), a1.col(j), a0.col(i), a1.col(i)));
    }
    return r;
}

/// Test set spanning the representation subspace: a few interior modes and
/// deficiency solutions at +-i and at one generic point.
inline std::vector<DomainElement> green_test_elements(ModelOperator const& model) {
    std::vector<DomainElement> xs = domain_basis(model, 3).elements;
    for (cplx l : {I, -I, cplx{1.0, 2.0}}) {
        auto const k = deficiency_basis(model, l);
        xs.insert(xs.end(), k.begin(), k.end());
    }
    return xs;
}

namespace detail {

inline BoundaryTriplet certify(BoundaryTriplet tr, Tolerances const& tol) {
    auto const xs = green_test_elements(tr.model);
    auto const rep = green_report(tr, xs);
    tr.certified_green_residual = rep.max_residual;
    if (!(rep.max_residual < tol.green))
        throw DiagnosticFailure("boundary triplet for " + tr.model.id() + " fails the Green identity (residual " +
                                std::to_string(rep.max_residual) + ")");
    return tr;
}

} // namespace detail

/// The standard triplet of each model:
///   momentum block (G = C):  Gamma0 f = (f(0) + f(l)) / sqrt2,  Gamma1 f = i (f(0) - f(l)) / sqrt2
///   schrodinger (G = C^2):   Gamma0 f = (f(0), f(l)),          Gamma1 f = (f'(0), -f'(l))
/// Certified against the Green identity before it is returned.
inline BoundaryTriplet standard_triplet(ModelOperator const& model, Tolerances const& tol = default_tolerances()) {
    auto const m = static_cast<Eigen::Index>(model.deficiency_index());
    auto const d = static_cast<Eigen::Index>(model.boundary_size());
    BoundaryTriplet tr{model, ComplexMatrix::Zero(m, d), ComplexMatrix::Zero(m, d), std::vector<double>(model.blocks(), 1.0),
                       TripletKind::standard, 0.0};
    double const r2 = 1.0 / std::sqrt(2.0);
    if (model.first_order()) {
        for (Eigen::Index k = 0; k < m; ++k) {
            tr.gamma0(k, 2 * k) = r2;
            tr.gamma0(k, 2 * k + 1) = r2;
            tr.gamma1(k, 2 * k) = I * r2;
            tr.gamma1(k, 2 * k + 1) = -I * r2;
        }
    } else {
        tr.gamma0(0, 0) = 1.0;  // f(0)
        tr.gamma0(1, 1) = 1.0;  // f(l)
        tr.gamma1(0, 2) = 1.0;  // f'(0)
        tr.gamma1(1, 3) = -1.0; // -f'(l)
    }
    return detail::certify(std::move(tr), tol);
}

/// Gamma0 -> r_k Gamma0, Gamma1 -> Gamma1 / r_k on block k. Preserves the Green form exactly.
inline BoundaryTriplet scaled_triplet(BoundaryTriplet tr, std::vector<double> const& scales) {
    if (scales.size() != tr.model.blocks()) throw StructuralError("scaled_triplet: one scale per block required");
    auto const per = static_cast<Eigen::Index>(tr.model.block_deficiency());
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0)) throw StructuralError("scaled_triplet: scales must be positive");
        for (Eigen::Index r = 0; r < per; ++r) {
            auto const row = static_cast<Eigen::Index>(k) * per + r;
            tr.gamma0.row(row) *= scales[k];
            tr.gamma1.row(row) /= scales[k];
        }
        tr.scales[k] *= scales[k];
    }
    tr.kind = TripletKind::scaled;
    return tr;
}

/// Regularized triplet for sums of momentum blocks: r_k^2 = Im M_k(i) = tanh(l_k / 2),
/// so each block's Weyl function satisfies M_k(i) = i exactly.
inline BoundaryTriplet regularized_direct_sum_triplet(ModelOperator const& model, Tolerances const& tol = default_tolerances()) {
    if (!model.first_order())
        throw ConfigError("regularized_direct_sum_triplet: model must be a sum of momentum blocks");
    std::vector<double> r(model.blocks());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::sqrt(std::tanh(0.5 * model.length(k)));
    auto tr = scaled_triplet(standard_triplet(model, tol), r);
    tr.kind = TripletKind::regularized;
    return detail::certify(std::move(tr), tol);
}

// ---------------------------------------------------------------------------
// Extensions

/// e^{i lambda l_k} = w_k for block k of a block-diagonal U on a momentum-type triplet.
struct BlockPhase {
    cplx u;
    cplx w;
    double theta = 0.0;          // arg w in (-pi, pi]
    bool gamma0_kernel = false;  // u_k = 1: the block carries Gamma0 x = 0
};

/// arg in (-pi, pi]; -pi is mapped to +pi.
inline double phase_arg(cplx w) {
    double t = std::arg(w);
    if (t <= -pi) t = pi;
    return t;
}

/// w = [(1 - u) - r^2 (1 + u)] / [(1 - u) + r^2 (1 + u)], with u = 1 handled exactly (w = -1).
inline BlockPhase block_phase(cplx u, double r, Tolerances const& tol = default_tolerances()) {
    BlockPhase p{u, cplx{-1.0, 0.0}, pi, true};
    if (u == cplx{1.0, 0.0}) return p;
    double const r2 = r * r;
    cplx const num = (1.0 - u) - r2 * (1.0 + u);
    cplx const den = (1.0 - u) + r2 * (1.0 + u);
    if (std::abs(den) < tol.phase_singular) return p;
    p.w = num / den;
    p.theta = phase_arg(p.w);
    p.gamma0_kernel = false;
    return p;
}

struct ExtensionSpec {
    BoundaryTriplet triplet;
    ComplexMatrix U;
    ComplexMatrix condition;          // (Id - U) Gamma1 - i (Id + U) Gamma0, m x d
    std::vector<BlockPhase> phases;   // block-diagonal U on momentum-type triplets only
    std::string label;

    bool has_phases() const { return !phases.empty(); }

    /// ||Gamma_- x - U Gamma_+ x||
    double membership_residual(DomainElement const& x) const {
        ComplexVector const bd = boundary_values(x);
        return (triplet.gamma_minus() * bd - U * (triplet.gamma_plus() * bd)).norm();
    }
    /// ||(Id - U) Gamma1 x - i (Id + U) Gamma0 x||; equals sqrt2 * membership_residual.
    double condition_residual(DomainElement const& x) const { return (condition * boundary_values(x)).norm(); }
};

inline bool is_block_diagonal(ComplexMatrix const& u, std::size_t block_size, double tol = 1e-14) {
    for (Eigen::Index j = 0; j < u.cols(); ++j)
        for (Eigen::Index i = 0; i < u.rows(); ++i)
            if (static_cast<std::size_t>(i) / block_size != static_cast<std::size_t>(j) / block_size && std::abs(u(i, j)) > tol)
                return false;
    return true;
}

/// The self-adjoint extension T_U of the triplet.
inline ExtensionSpec extension_from_unitary(BoundaryTriplet const& tr, ComplexMatrix const& u, std::string label = {},
                                            Tolerances const& tol = default_tolerances()) {
    auto const m = static_cast<Eigen::Index>(tr.m());
    if (u.rows() != m || u.cols() != m)
        throw StructuralError("extension_from_unitary: U must be " + std::to_string(m) + "x" + std::to_string(m));
    require_unitary(u, tol.unitary, "extension_from_unitary");
    ComplexMatrix const id = ComplexMatrix::Identity(m, m);
    ExtensionSpec ext{tr, u, (id - u) * tr.gamma1 - I * (id + u) * tr.gamma0, {}, std::move(label)};
    if (tr.model.first_order() && is_block_diagonal(u, 1))
        for (Eigen::Index k = 0; k < m; ++k)
            ext.phases.push_back(block_phase(u(k, k), tr.scales[static_cast<std::size_t>(k)], tol));
    return ext;
}

struct CayleyExtension {
    ExtensionSpec extension;
    std::vector<DomainElement> boundary_elements; // x + Vx for x in the ker(T* - i) basis
    std::optional<cplx> omega;                    // single momentum block: f(l) = omega f(0)
    double isometry_residual = 0.0;
    double membership_residual = 0.0;             // max over boundary_elements
};

/// von Neumann construction: D = D(T) + {x + Vx : x in ker(T* - i)} for a unitary
/// V : ker(T* - i) -> ker(T* + i) given as a matrix from deficiency_basis(i)
/// coordinates to deficiency_basis(-i) coordinates. Returns the same extension
/// expressed through the triplet parameter U.
inline CayleyExtension cayley_extension(BoundaryTriplet const& tr, ComplexMatrix const& v,
                                        Tolerances const& tol = default_tolerances()) {
    auto const kp = deficiency_basis(tr.model, I);
    auto const km = deficiency_basis(tr.model, -I);
    auto const m = static_cast<Eigen::Index>(kp.size());
    if (v.rows() != m || v.cols() != m) throw StructuralError("cayley_extension: V has the wrong shape");
    ComplexMatrix const gp = gram_l2(kp), gm = gram_l2(km);
    double const iso = norm2(v.adjoint() * gm * v - gp) / norm2(gp);
    if (!(iso < tol.unitary))
        throw StructuralError("cayley_extension: V is not isometric (residual " + std::to_string(iso) + ")");

    std::vector<DomainElement> zs;
    for (Eigen::Index j = 0; j < m; ++j) zs.push_back(kp[static_cast<std::size_t>(j)] + combine(km, v.col(j)));
    ComplexMatrix const bd = boundary_matrix(zs);
    ComplexMatrix const plus = tr.gamma_plus() * bd, minus = tr.gamma_minus() * bd;
    ComplexMatrix u = minus * solve_checked(plus, ComplexMatrix::Identity(m, m), tol.rank, "cayley_extension");
    // remove the O(eps) drift from unitarity before validation
    Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU() * svd.matrixV().adjoint();
    CayleyExtension out{extension_from_unitary(tr, u, "cayley", tol), std::move(zs), std::nullopt, iso, 0.0};
    for (auto const& x : out.boundary_elements)
        out.membership_residual = std::max(out.membership_residual, out.extension.membership_residual(x));
    if (tr.model.kind() == ModelKind::momentum) {
        auto const& z = out.boundary_elements.front();
        out.omega = z(0, tr.model.length(0)) / z(0, 0.0);
    }
    return out;
}

} // namespace saext
