#pragma once

// Spectra of self-adjoint extensions and compactness diagnostics.
//
// Momentum-type blocks with block-diagonal U have closed-form spectra
// e^{i lambda l_k} = w_k. Everything else is located by scanning the unitary
// eigencondition det(U - B(lambda)) = 0 along the real axis, where B(lambda) =
// Gamma_- gamma_+(lambda) is unitary. Rayleigh-Ritz on a basis of D(T_U)
// provides an independent cross-check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "random.hpp"
#include "weyl.hpp"

namespace saext {

struct SpectralEntry {
    double value = 0.0;
    std::size_t block = 0;   // 0 when the eigenvalue is not attached to one block
    long index = 0;          // n in (theta_k + 2 pi n) / l_k, or the root ordinal
    std::size_t multiplicity = 1;
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct SpectralReport {
    std::string model_id;
    std::string label;              // U identifier
    std::string method;             // "closed-form" or "eigencondition-scan"
    Interval window;
    std::vector<SpectralEntry> entries;   // sorted by value
    std::vector<double> block_min_abs;    // closed form only
    std::vector<Interval> unresolved;
    double max_imag = 0.0;          // |Im| before truncation to real
    double root_residual = 0.0;     // max sigma_min(U - B(lambda*)) over scanned roots

    /// Eigenvalues repeated by multiplicity, ascending.
    std::vector<double> values() const {
        std::vector<double> v;
        for (auto const& e : entries) v.insert(v.end(), e.multiplicity, e.value);
        return v;
    }
};

namespace detail {

/// Wrap into (-pi, pi].
inline double wrap_phase(double a) {
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

/// Eigenphases of U^H B(lambda) for real lambda.
class PhaseScanner {
public:
    PhaseScanner(ExtensionSpec const& ext, Tolerances const& tol) : ext_(ext), tol_(tol) {}

    ComplexMatrix b_real(double lambda) const {
        auto const& tr = ext_.triplet;
        ComplexMatrix const d = boundary_matrix(deficiency_basis(tr.model, lambda));
        ComplexMatrix const plus = tr.gamma_plus() * d;
        return tr.gamma_minus() * d * solve_checked(plus, ComplexMatrix::Identity(plus.rows(), plus.cols()), tol_.rank, "b_real");
    }

    std::vector<double> phases(double lambda) const {
        ComplexMatrix const w = ext_.U.adjoint() * b_real(lambda);
        Eigen::ComplexEigenSolver<ComplexMatrix> es(w, false);
        std::vector<double> p;
        for (Eigen::Index i = 0; i < w.rows(); ++i) p.push_back(phase_arg(es.eigenvalues()(i)));
        std::sort(p.begin(), p.end());
        return p;
    }

    /// Smallest singular value of U - B(lambda).
    double sigma_min(double lambda) const {
        RealVector const s = singular_values(ext_.U - b_real(lambda));
        return s(s.size() - 1);
    }

private:
    ExtensionSpec const& ext_;
    Tolerances const& tol_;
};

/// Displacements q_pi(j) - p_j (wrapped) for the matching minimizing the largest move.
inline std::vector<double> match_phases(std::vector<double> const& p, std::vector<double> const& q) {
    std::size_t const m = p.size();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> best(m, 0.0);
    double best_max = 1e300;
    auto eval = [&] {
        double mx = 0.0;
        std::vector<double> d(m);
        for (std::size_t j = 0; j < m; ++j) {
            d[j] = wrap_phase(q[perm[j]] - p[j]);
            mx = std::max(mx, std::abs(d[j]));
        }
        if (mx < best_max) {
            best_max = mx;
            best = d;
        }
    };
    if (m <= 5) {
        do eval(); while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // greedy nearest match
        std::vector<bool> used(m, false);
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t bi = 0;
            double bd = 1e300;
            for (std::size_t i = 0; i < m; ++i)
                if (!used[i] && std::abs(wrap_phase(q[i] - p[j])) < bd) {
                    bd = std::abs(wrap_phase(q[i] - p[j]));
                    bi = i;
                }
            used[bi] = true;
            best[j] = wrap_phase(q[bi] - p[j]);
        }
    }
    return best;
}

/// Phases that move onto or across 0 (left endpoint excluded).
inline std::size_t count_crossings(std::vector<double> const& p, std::vector<double> const& d) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        double const e = p[j] + d[j];
        if ((p[j] < 0.0 && e >= 0.0) || (p[j] > 0.0 && e <= 0.0)) ++c;
    }
    return c;
}

inline double max_abs(std::vector<double> const& d) {
    double m = 0.0;
    for (double x : d) m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

namespace detail {

inline SpectralReport closed_form_spectrum(ExtensionSpec const& ext, Interval w) {
    auto const& model = ext.triplet.model;
    SpectralReport r;
    r.method = "closed-form";
    for (std::size_t k = 0; k < ext.phases.size(); ++k) {
        double const l = model.length(k);
        double const theta = ext.phases[k].theta;
        auto const n_lo = static_cast<long>(std::ceil((w.lo * l - theta) / (2.0 * pi)));
        auto const n_hi = static_cast<long>(std::floor((w.hi * l - theta) / (2.0 * pi)));
        for (long n = n_lo; n <= n_hi; ++n) {
            double const v = (theta + 2.0 * pi * static_cast<double>(n)) / l;
            if (v >= w.lo && v <= w.hi) r.entries.push_back({v, k, n, 1});
        }
        // smallest |lambda| over all n, independent of the window
        double const t = std::min(std::abs(theta), 2.0 * pi - std::abs(theta));
        r.block_min_abs.push_back(t / l);
    }
    return r;
}

inline SpectralReport scanned_spectrum(ExtensionSpec const& ext, Interval w, Tolerances const& tol) {
    SpectralReport r;
    r.method = "eigencondition-scan";
    PhaseScanner const scan(ext, tol);
    auto const& model = ext.triplet.model;
    double lmax = 0.0;
    for (double l : model.lengths()) lmax = std::max(lmax, l);

    // phases of e^{i lambda l}-type move at rate ~ l (first order) or l / (2 sqrt lambda)
    auto step_estimate = [&](double lambda) {
        double const gap = model.first_order() ? 2.0 * pi / lmax
                                               : 2.0 * pi * 2.0 * std::max(std::sqrt(std::abs(lambda)), pi / lmax) / lmax;
        return gap / 32.0;
    };
    double const min_step = 1e-13 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});

    long ordinal = 0;
    auto record = [&](double a, double b, std::size_t mult) {
        double const root = 0.5 * (a + b);
        r.entries.push_back({root, 0, ordinal++, mult});
        r.root_residual = std::max(r.root_residual, scan.sigma_min(root));
    };

    // bisect [a, b] holding `count` crossings until each cluster is narrower than the root tolerance
    auto resolve = [&](auto&& self, double a, std::vector<double> const& pa, double b, std::size_t count) -> void {
        if (count == 0) return;
        if (b - a <= tol.root * std::max(1.0, std::abs(a))) {
            record(a, b, count);
            return;
        }
        double const mid = 0.5 * (a + b);
        auto const pm = scan.phases(mid);
        std::size_t const left = count_crossings(pa, match_phases(pa, pm));
        self(self, a, pa, mid, std::min(left, count));
        if (count > left) self(self, mid, pm, b, count - left);
    };

    auto p = scan.phases(w.lo);
    for (double x : p)
        if (x == 0.0) {
            r.entries.push_back({w.lo, 0, ordinal++, 1});
        }
    double lambda = w.lo;
    double h = step_estimate(lambda);
    while (lambda < w.hi) {
        h = std::min(h, w.hi - lambda);
        auto q = scan.phases(lambda + h);
        auto d = match_phases(p, q);
        while (max_abs(d) > pi / 8.0 && h > min_step) {
            h *= 0.5;
            q = scan.phases(lambda + h);
            d = match_phases(p, q);
        }
        if (max_abs(d) > pi / 8.0) {
            r.unresolved.push_back({lambda, lambda + h});
        } else if (std::size_t const c = count_crossings(p, d); c > 0) {
            resolve(resolve, lambda, p, lambda + h, c);
        }
        lambda += h;
        p = std::move(q);
        h = std::min(2.0 * h, step_estimate(lambda));
    }
    return r;
}

} // namespace detail

/// Eigenvalues of T_U in the window [lo, hi].
inline SpectralReport extension_spectrum(ExtensionSpec const& ext, double lo, double hi,
                                         Tolerances const& tol = default_tolerances()) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ContractError("extension_spectrum: window must be bounded");
    SpectralReport r = ext.has_phases() ? detail::closed_form_spectrum(ext, {lo, hi})
                                        : detail::scanned_spectrum(ext, {lo, hi}, tol);
    r.model_id = ext.triplet.model.id();
    r.label = ext.label;
    r.window = {lo, hi};
    std::stable_sort(r.entries.begin(), r.entries.end(),
                     [](SpectralEntry const& a, SpectralEntry const& b) { return a.value < b.value; });
    return r;
}

/// #{eigenvalues with |lambda| <= cap}, ties within a relative 1e-12 counted in.
inline std::size_t counting_function(SpectralReport const& r, double cap, Tolerances const& tol = default_tolerances()) {
    if (cap < 0.0) throw ContractError("counting_function: cap must be nonnegative");
    if (r.window.lo > -cap || r.window.hi < cap)
        throw ContractError("counting_function: report window does not contain [-cap, cap]");
    double const edge = cap * (1.0 + tol.count_tie);
    std::size_t n = 0;
    for (auto const& e : r.entries)
        if (std::abs(e.value) <= edge) n += e.multiplicity;
    return n;
}

// ---------------------------------------------------------------------------
// Galerkin cross-check

struct GalerkinResult {
    std::vector<double> values;          // ascending
    double hermiticity_residual = 0.0;   // of A before Hermitization, relative to ||A||
    double mass_condition = 0.0;
    double pencil_residual = 0.0;
    double boundary_residual = 0.0;      // max condition residual of the augmenting functions
    std::size_t basis_size = 0;
};

/// Rayleigh-Ritz on domain_basis(n) plus m functions from ker(T* -+ i) that
/// satisfy the boundary condition of T_U exactly.
inline GalerkinResult galerkin_spectrum(ExtensionSpec const& ext, std::size_t n, Tolerances const& tol = default_tolerances()) {
    auto const& model = ext.triplet.model;
    std::vector<DomainElement> basis = domain_basis(model, n, tol).elements;
    std::vector<DomainElement> reps = deficiency_basis(model, I);
    auto const km = deficiency_basis(model, -I);
    reps.insert(reps.end(), km.begin(), km.end());
    auto const ns = nullspace(ext.condition * boundary_matrix(reps), tol.rank);
    if (static_cast<std::size_t>(ns.basis.cols()) != model.deficiency_index())
        throw StructuralError("galerkin_spectrum: boundary condition has an unexpected solution space");
    GalerkinResult g;
    for (Eigen::Index j = 0; j < ns.basis.cols(); ++j) {
        basis.push_back(combine(reps, ns.basis.col(j)));
        g.boundary_residual = std::max(g.boundary_residual, ext.condition_residual(basis.back()));
    }
    auto const tb = apply_T_star(basis);
    ComplexMatrix a = gram_l2(tb, basis);
    ComplexMatrix const b = gram_l2(basis);
    g.hermiticity_residual = norm2(a - a.adjoint()) / norm2(a);
    auto const s = singular_values(b);
    g.mass_condition = s(0) / s(s.size() - 1);
    if (!(g.mass_condition <= tol.galerkin_cond))
        throw StructuralError("galerkin_spectrum: basis Gram condition " + std::to_string(g.mass_condition) +
                              " exceeds the limit; use a smaller n");
    a = 0.5 * (a + a.adjoint());
    Tolerances relaxed = tol;
    relaxed.hermitian = 1.0;
    auto const pe = hermitian_pencil_eig(a, b, relaxed);
    g.values.assign(pe.values.data(), pe.values.data() + pe.values.size());
    g.pencil_residual = pe.residual;
    g.basis_size = basis.size();
    return g;
}

// ---------------------------------------------------------------------------
// Compactness diagnostics

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0, slope_stderr = 0.0;
};

inline LinearFit linear_fit(std::vector<double> const& x, std::vector<double> const& y) {
    if (x.size() != y.size() || x.size() < 3) throw ContractError("linear_fit: need at least 3 matching points");
    double const n = static_cast<double>(x.size());
    double const mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double const my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double const e = y[i] - f.intercept - f.slope * x[i];
        sse += e * e;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    return f;
}

struct EmbeddingProbe {
    std::vector<double> sigma;  // nonincreasing
    LinearFit decay;            // log sigma_k against log k
    double pencil_residual = 0.0;

    /// #{sigma > eps}
    std::size_t count_above(double eps) const {
        return static_cast<std::size_t>(std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > eps; }));
    }
};

/// Generalized singular values of (D(T), ||.||_g) -> H on domain_basis(n).
inline EmbeddingProbe embedding_singular_values(ModelOperator const& model, std::size_t n,
                                                Tolerances const& tol = default_tolerances()) {
    if (n < 4) throw ContractError("embedding_singular_values: n must be >= 4");
    auto const basis = domain_basis(model, n, tol).elements;
    auto const pe = hermitian_pencil_eig(gram_l2(basis), gram_graph(basis), tol);
    EmbeddingProbe p;
    p.pencil_residual = pe.residual;
    for (Eigen::Index i = pe.values.size(); i-- > 0;) p.sigma.push_back(std::sqrt(std::max(0.0, pe.values(i))));
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < p.sigma.size(); ++k) {
        lx.push_back(std::log(static_cast<double>(k + 1)));
        ly.push_back(std::log(p.sigma[k]));
    }
    p.decay = linear_fit(lx, ly);
    return p;
}

struct RegularityMargin {
    double margin = 0.0;
    std::vector<double> per_block; // first-order models only
};

namespace detail {

inline double margin_of(std::vector<DomainElement> const& basis, cplx lambda, Tolerances const& tol) {
    std::vector<DomainElement> img;
    for (auto const& b : basis) img.push_back(apply_T_star(b) - lambda * b);
    auto const pe = hermitian_pencil_eig(gram_l2(img), gram_l2(basis), tol);
    return std::sqrt(std::max(0.0, pe.values(0)));
}

} // namespace detail

/// min over the D(T) truncation of ||(T - lambda) x|| / ||x||.
inline RegularityMargin regularity_margin(ModelOperator const& model, cplx lambda, std::size_t n,
                                          Tolerances const& tol = default_tolerances()) {
    if (n < 4) throw ContractError("regularity_margin: n must be >= 4");
    auto const basis = domain_basis(model, n, tol).elements;
    RegularityMargin r;
    r.margin = detail::margin_of(basis, lambda, tol);
    if (model.first_order() && model.blocks() > 1)
        for (std::size_t k = 0; k < model.blocks(); ++k) {
            std::vector<DomainElement> const block(basis.begin() + static_cast<long>(k * n),
                                                   basis.begin() + static_cast<long>((k + 1) * n));
            r.per_block.push_back(detail::margin_of(block, lambda, tol));
        }
    return r;
}

// ---------------------------------------------------------------------------
// Relative dimension and index

struct SubspacePair {
    ComplexMatrix w1; // orthonormal columns
    ComplexMatrix w2;
};

struct RelativeDimension {
    long dim_intersection = 0; // dim(W2 cap W1^perp)
    long codim_sum = 0;        // codim(W2 + W1^perp)
    long value = 0;
    bool ambiguous = false;
};

/// dim(W2 cap W1^perp) - codim(W2 + W1^perp), from the rank of W1^H W2.
inline RelativeDimension relative_dimension(SubspacePair const& p, Tolerances const& tol = default_tolerances()) {
    if (p.w1.rows() != p.w2.rows()) throw StructuralError("relative_dimension: ambient dimensions differ");
    for (auto const* w : {&p.w1, &p.w2}) {
        if (w->cols() == 0) continue;
        double const r = (w->adjoint() * *w - ComplexMatrix::Identity(w->cols(), w->cols())).cwiseAbs().maxCoeff();
        if (!(r < tol.orthonormal)) throw StructuralError("relative_dimension: columns are not orthonormal");
    }
    RelativeDimension d;
    std::size_t rank = 0;
    if (p.w1.cols() > 0 && p.w2.cols() > 0) {
        auto const ri = numerical_rank(p.w1.adjoint() * p.w2, tol.rank, true);
        rank = ri.rank;
        d.ambiguous = ri.ambiguous;
    }
    d.dim_intersection = static_cast<long>(p.w2.cols()) - static_cast<long>(rank);
    d.codim_sum = static_cast<long>(p.w1.cols()) - static_cast<long>(rank);
    d.value = d.dim_intersection - d.codim_sum;
    return d;
}

struct IndexCheck {
    cplx lambda;
    ComplexMatrix m_prime;   // gamma(conj lambda)^* gamma(lambda)
    std::size_t kernel = 0;
    std::size_t cokernel = 0;
    long index = 0;
    long n_lambda = 0;       // relative dimension of ker(T* - conj lambda) w.r.t. ker(T* - lambda)
    bool ambiguous = false;
    double min_hermitian_eig = 0.0; // of the Hermitian part, at lambda = i positive definiteness
};

/// Fredholm data of M'(lambda) at the truncation, and n(lambda) from the deficiency subspaces.
inline IndexCheck index_check_M_prime(BoundaryTriplet const& tr, cplx lambda, Tolerances const& tol = default_tolerances()) {
    if (!(lambda.imag() > 0.0)) throw ContractError("index_check_M_prime: lambda must lie in the upper half-plane");
    IndexCheck c;
    c.lambda = lambda;
    auto const g = gamma_columns(tr, lambda, Functional::gamma0, tol);
    auto const gb = gamma_columns(tr, std::conj(lambda), Functional::gamma0, tol);
    c.m_prime = gram_l2(g, gb);
    auto const ri = numerical_rank(c.m_prime, tol.rank);
    auto const m = static_cast<std::size_t>(c.m_prime.rows());
    c.kernel = m - ri.rank;
    c.cokernel = m - ri.rank;
    c.index = static_cast<long>(c.kernel) - static_cast<long>(c.cokernel);
    c.ambiguous = ri.ambiguous;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (c.m_prime + c.m_prime.adjoint()), Eigen::EigenvaluesOnly);
    c.min_hermitian_eig = es.eigenvalues().minCoeff();

    // Orthonormal coordinates on span(ker(T* - lambda) + ker(T* - conj lambda)) via Cholesky of the Gram.
    std::vector<DomainElement> all = g;
    all.insert(all.end(), gb.begin(), gb.end());
    ComplexMatrix const gram = gram_l2(all);
    Eigen::LLT<ComplexMatrix> llt(0.5 * (gram + gram.adjoint()));
    if (llt.info() != Eigen::Success) throw StructuralError("index_check_M_prime: deficiency subspaces are dependent");
    ComplexMatrix const lh = llt.matrixU(); // gram = L L^H, L^H upper
    auto subspace = [&](Eigen::Index offset) {
        ComplexMatrix coords = ComplexMatrix::Zero(gram.rows(), static_cast<Eigen::Index>(m));
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) coords(offset + j, j) = 1.0;
        auto const on = gram_orthonormalize(coords, gram, tol);
        return ComplexMatrix(lh * on.vectors);
    };
    auto const rd = relative_dimension({subspace(0), subspace(static_cast<Eigen::Index>(m))}, tol);
    c.n_lambda = rd.value;
    c.ambiguous = c.ambiguous || rd.ambiguous;
    return c;
}

// ---------------------------------------------------------------------------
// Trend experiments on direct sums

enum class FamilyRule { minus_i, pi_over_k, minus_one };

struct FamilyLevel {
    std::size_t K = 0;
    std::vector<double> lambda_min;  // per block k = 1..K, smallest |eigenvalue|
    std::vector<double> tail;        // |u_k - 1|
    double u_minus_id_norm = 0.0;    // ||U - Id||
    std::size_t zero_multiplicity = 0;
    std::vector<std::pair<double, std::size_t>> counting; // (Lambda, N(Lambda))
};

struct CompactnessReport {
    std::string family;
    std::vector<FamilyLevel> levels;
    std::optional<LinearFit> growth; // lambda_min against k over k >= fit_from, largest level
};

/// Per-block minimal eigenvalues of T_U on direct sums l_k = 1/k with the
/// regularized triplet, for a block-diagonal family u_k.
inline CompactnessReport compactness_report(std::vector<cplx> (*family)(std::size_t), std::string name,
                                            std::vector<std::size_t> const& k_levels, double window,
                                            std::size_t fit_from = 8, Tolerances const& tol = default_tolerances()) {
    CompactnessReport rep;
    rep.family = std::move(name);
    for (std::size_t K : k_levels) {
        auto const model = build_direct_sum(K);
        auto const tr = regularized_direct_sum_triplet(model, tol);
        auto const u = family(K);
        ComplexMatrix um = ComplexMatrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
        for (std::size_t k = 0; k < K; ++k) um(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = u[k];
        auto const ext = extension_from_unitary(tr, um, rep.family, tol);
        if (!ext.has_phases()) throw ConfigError("compactness_report: family must be block-diagonal");
        FamilyLevel lv;
        lv.K = K;
        auto const sp = extension_spectrum(ext, -window, window, tol);
        lv.lambda_min = sp.block_min_abs;
        for (std::size_t k = 0; k < K; ++k) {
            lv.tail.push_back(std::abs(u[k] - 1.0));
            lv.u_minus_id_norm = std::max(lv.u_minus_id_norm, lv.tail.back());
        }
        for (auto const& e : sp.entries)
            if (e.value == 0.0) lv.zero_multiplicity += e.multiplicity;
        for (int j = 1; j <= 8; ++j) {
            double const cap = window * j / 8.0;
            lv.counting.emplace_back(cap, counting_function(sp, cap, tol));
        }
        rep.levels.push_back(std::move(lv));
    }
    if (!rep.levels.empty() && rep.levels.back().K >= fit_from + 2) {
        std::vector<double> x, y;
        auto const& lv = rep.levels.back();
        for (std::size_t k = fit_from; k <= lv.K; ++k) {
            x.push_back(static_cast<double>(k));
            y.push_back(lv.lambda_min[k - 1]);
        }
        rep.growth = linear_fit(x, y);
    }
    return rep;
}

namespace families {

inline std::vector<cplx> minus_i(std::size_t K) { return std::vector<cplx>(K, -I); }
inline std::vector<cplx> minus_one(std::size_t K) { return std::vector<cplx>(K, cplx{-1.0, 0.0}); }
inline std::vector<cplx> pi_over_k(std::size_t K) {
    std::vector<cplx> u(K);
    for (std::size_t k = 0; k < K; ++k) u[k] = std::polar(1.0, pi / static_cast<double>(k + 1));
    return u;
}

} // namespace families

// ---------------------------------------------------------------------------
// Kuiper obstruction

struct KuiperTrial {
    double a_norm = 0.0;
    double sigma_half_sum = 0.0;   // min sigma of (e^{iA} + Id) / 2
    double sigma_neg = 0.0;        // min sigma of (-e^{iA} - Id)
    double bound_gap = 0.0;        // e^{||A||} - 1 - ||e^{iA} - Id||, >= 0
};

struct KuiperReport {
    std::vector<KuiperTrial> trials;
    bool all_pass() const {
        return std::all_of(trials.begin(), trials.end(), [](KuiperTrial const& t) {
            return t.a_norm < std::log(3.0) && t.sigma_half_sum > 0.0 && t.sigma_neg > 0.0 && t.bound_gap >= -1e-12;
        });
    }
};

/// Random Hermitian A with ||A|| uniform in (0, ln 3); U = -e^{iA} has U - Id invertible.
inline KuiperReport kuiper_check(std::uint64_t seed, std::size_t trials = 100, std::size_t dim = 8,
                                 Tolerances const& tol = default_tolerances()) {
    Rng rng(seed);
    KuiperReport rep;
    auto const n = static_cast<Eigen::Index>(dim);
    ComplexMatrix const id = ComplexMatrix::Identity(n, n);
    for (std::size_t t = 0; t < trials; ++t) {
        double const target = std::log(3.0) * (0.05 + 0.9 * rng.uniform());
        ComplexMatrix const a = random_hermitian(rng, dim, target);
        ComplexMatrix const e = unitary_exp(a, tol);
        KuiperTrial k;
        k.a_norm = norm2(a);
        RealVector const s1 = singular_values(0.5 * (e + id));
        RealVector const s2 = singular_values(-e - id);
        k.sigma_half_sum = s1(s1.size() - 1);
        k.sigma_neg = s2(s2.size() - 1);
        k.bound_gap = std::exp(k.a_norm) - 1.0 - norm2(e - id);
        rep.trials.push_back(k);
    }
    return rep;
}

} // namespace saext
