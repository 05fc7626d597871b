#pragma once

// Model symmetric operators on intervals with closed-form adjoint action.
//
//   momentum     T = -i d/dt on L^2(0, l),   D(T) = {f in H^1 : f(0) = f(l) = 0}
//   schrodinger  T = -d^2/dt^2 on L^2(0, l), D(T) = {f in H^2 : f, f' vanish at 0, l}
//   direct-sum   orthogonal sum of momentum blocks on (0, l_k), k = 1..K
//
// Every function the toolkit manipulates (interior modes, deficiency
// solutions, resolvent outputs) is an exponential polynomial on each block,
// sum_j c_j t^{p_j} e^{a_j t}, so T*, boundary values and derivatives are exact.
// Inner products use composite Gauss-Legendre quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "quadrature.hpp"

namespace saext {

enum class ModelKind { momentum, schrodinger, direct_sum };

inline char const* to_string(ModelKind k) {
    switch (k) {
    case ModelKind::momentum: return "momentum";
    case ModelKind::schrodinger: return "schrodinger";
    case ModelKind::direct_sum: return "direct-sum";
    }
    return "?";
}

class ModelOperator {
public:
    ModelOperator(ModelKind kind, std::vector<double> lengths) : kind_(kind), lengths_(std::move(lengths)) {}

    ModelKind kind() const { return kind_; }
    std::vector<double> const& lengths() const { return lengths_; }
    double length(std::size_t block) const { return lengths_[block]; }
    std::size_t blocks() const { return lengths_.size(); }

    /// Blocks act as -i d/dt (momentum and direct sums).
    bool first_order() const { return kind_ != ModelKind::schrodinger; }

    /// Deficiency index contributed by one block.
    std::size_t block_deficiency() const { return first_order() ? 1 : 2; }
    /// Deficiency indices are (m, m) with m = deficiency_index().
    std::size_t deficiency_index() const { return block_deficiency() * blocks(); }

    /// Boundary values per block: (f(0), f(l)) or (f(0), f(l), f'(0), f'(l)).
    std::size_t block_boundary_size() const { return first_order() ? 2 : 4; }
    std::size_t boundary_size() const { return block_boundary_size() * blocks(); }

    std::string id() const {
        if (kind_ == ModelKind::direct_sum) return "direct-sum-K" + std::to_string(blocks());
        return to_string(kind_);
    }

    friend bool operator==(ModelOperator const&, ModelOperator const&) = default;

private:
    ModelKind kind_;
    std::vector<double> lengths_;
};

/// Validated model construction.
inline ModelOperator build_model(ModelKind kind, std::vector<double> lengths) {
    if (lengths.empty()) throw ConfigError("build_model: at least one length is required");
    for (double l : lengths)
        if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("build_model: lengths must be positive");
    if (kind != ModelKind::direct_sum && lengths.size() != 1)
        throw ConfigError(std::string("build_model: ") + to_string(kind) + " takes exactly one length");
    return ModelOperator(kind, std::move(lengths));
}

/// Direct sum of K momentum blocks with the default schedule l_k = 1/k.
inline ModelOperator build_direct_sum(std::size_t k_blocks) {
    if (k_blocks == 0) throw ConfigError("build_direct_sum: K must be >= 1");
    std::vector<double> lengths(k_blocks);
    for (std::size_t k = 0; k < k_blocks; ++k) lengths[k] = 1.0 / static_cast<double>(k + 1);
    return build_model(ModelKind::direct_sum, std::move(lengths));
}

// ---------------------------------------------------------------------------

/// coef * t^power * exp(rate * t)
struct ExpTerm {
    cplx coef;
    int power = 0;
    cplx rate;
};

using TermList = std::vector<ExpTerm>;

namespace detail {

inline cplx eval_terms(TermList const& terms, double t) {
    cplx s = 0.0;
    for (auto const& e : terms) s += e.coef * std::pow(t, e.power) * std::exp(e.rate * t);
    return s;
}

inline TermList derivative(TermList const& terms) {
    TermList out;
    out.reserve(2 * terms.size());
    for (auto const& e : terms) {
        if (e.rate != 0.0) out.push_back({e.coef * e.rate, e.power, e.rate});
        if (e.power > 0) out.push_back({e.coef * static_cast<double>(e.power), e.power - 1, e.rate});
    }
    return out;
}

/// Merge identical (power, rate) atoms and drop exact zeros.
inline TermList canonical(TermList terms) {
    std::sort(terms.begin(), terms.end(), [](ExpTerm const& a, ExpTerm const& b) {
        if (a.power != b.power) return a.power < b.power;
        if (a.rate.real() != b.rate.real()) return a.rate.real() < b.rate.real();
        return a.rate.imag() < b.rate.imag();
    });
    TermList out;
    for (auto const& e : terms) {
        if (!out.empty() && out.back().power == e.power && out.back().rate == e.rate)
            out.back().coef += e.coef;
        else
            out.push_back(e);
    }
    std::erase_if(out, [](ExpTerm const& e) { return e.coef == 0.0; });
    return out;
}

inline TermList product(TermList const& a, TermList const& b) {
    TermList out;
    out.reserve(a.size() * b.size());
    for (auto const& x : a)
        for (auto const& y : b) out.push_back({x.coef * y.coef, x.power + y.power, x.rate + y.rate});
    return canonical(std::move(out));
}

inline double max_rate(TermList const& terms) {
    double r = 0.0;
    for (auto const& e : terms) r = std::max(r, std::abs(e.rate));
    return r;
}

inline int max_power(TermList const& terms) {
    int p = 0;
    for (auto const& e : terms) p = std::max(p, e.power);
    return p;
}

} // namespace detail

/// Element of the representation subspace of D(T*): per-block exponential
/// polynomials. Immutable in spirit; arithmetic returns new elements.
class DomainElement {
public:
    explicit DomainElement(ModelOperator model) : model_(std::move(model)), blocks_(model_.blocks()) {}
    DomainElement(ModelOperator model, std::vector<TermList> blocks) : model_(std::move(model)), blocks_(std::move(blocks)) {
        if (blocks_.size() != model_.blocks()) throw StructuralError("DomainElement: block count mismatch");
        for (auto& b : blocks_) b = detail::canonical(std::move(b));
    }

    /// Single atom on one block.
    static DomainElement atom(ModelOperator const& model, std::size_t block, cplx coef, int power, cplx rate) {
        std::vector<TermList> b(model.blocks());
        b.at(block).push_back({coef, power, rate});
        return DomainElement(model, std::move(b));
    }

    ModelOperator const& model() const { return model_; }
    TermList const& terms(std::size_t block) const { return blocks_[block]; }
    std::vector<TermList> const& blocks() const { return blocks_; }
    bool empty_block(std::size_t block) const { return blocks_[block].empty(); }

    cplx operator()(std::size_t block, double t) const { return detail::eval_terms(blocks_[block], t); }
    cplx derivative(std::size_t block, double t) const {
        return detail::eval_terms(detail::derivative(blocks_[block]), t);
    }

    DomainElement& operator+=(DomainElement const& o) {
        require_same(o);
        for (std::size_t k = 0; k < blocks_.size(); ++k) {
            blocks_[k].insert(blocks_[k].end(), o.blocks_[k].begin(), o.blocks_[k].end());
            blocks_[k] = detail::canonical(std::move(blocks_[k]));
        }
        return *this;
    }
    DomainElement& operator*=(cplx s) {
        for (auto& b : blocks_) {
            for (auto& e : b) e.coef *= s;
            b = detail::canonical(std::move(b));
        }
        return *this;
    }
    friend DomainElement operator+(DomainElement a, DomainElement const& b) { return a += b; }
    friend DomainElement operator-(DomainElement a, DomainElement const& b) {
        DomainElement nb = b;
        nb *= -1.0;
        return a += nb;
    }
    friend DomainElement operator*(cplx s, DomainElement a) { return a *= s; }

    /// Pointwise product, blockwise.
    friend DomainElement product(DomainElement const& a, DomainElement const& b) {
        a.require_same(b);
        std::vector<TermList> out(a.blocks_.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = detail::product(a.blocks_[k], b.blocks_[k]);
        return DomainElement(a.model_, std::move(out));
    }

    void require_same(DomainElement const& o) const {
        if (!(model_ == o.model_)) throw StructuralError("DomainElement: elements belong to different models");
    }

private:
    ModelOperator model_;
    std::vector<TermList> blocks_;
};

inline DomainElement zero_element(ModelOperator const& model) { return DomainElement(model); }

/// sum_j coeffs(j) * elements[j]
inline DomainElement combine(std::span<DomainElement const> elements, ComplexVector const& coeffs) {
    if (elements.empty()) throw StructuralError("combine: empty element list");
    if (static_cast<std::size_t>(coeffs.size()) != elements.size()) throw StructuralError("combine: size mismatch");
    std::vector<TermList> blocks(elements.front().model().blocks());
    for (std::size_t j = 0; j < elements.size(); ++j) {
        elements.front().require_same(elements[j]);
        cplx const c = coeffs(static_cast<Eigen::Index>(j));
        if (c == 0.0) continue;
        for (std::size_t k = 0; k < blocks.size(); ++k)
            for (auto e : elements[j].terms(k)) {
                e.coef *= c;
                blocks[k].push_back(e);
            }
    }
    return DomainElement(elements.front().model(), std::move(blocks));
}

/// T* x: blockwise -i f' (first-order blocks) or -f'' (Schrodinger).
inline DomainElement apply_T_star(DomainElement const& x) {
    auto const& model = x.model();
    std::vector<TermList> out(model.blocks());
    for (std::size_t k = 0; k < model.blocks(); ++k) {
        if (model.first_order()) {
            out[k] = detail::derivative(x.terms(k));
            for (auto& e : out[k]) e.coef *= -I;
        } else {
            out[k] = detail::derivative(detail::derivative(x.terms(k)));
            for (auto& e : out[k]) e.coef *= -1.0;
        }
    }
    return DomainElement(model, std::move(out));
}

/// Exact boundary values, concatenated over blocks:
/// momentum (f(0), f(l)); schrodinger (f(0), f(l), f'(0), f'(l)).
inline ComplexVector boundary_values(DomainElement const& x) {
    auto const& model = x.model();
    ComplexVector bd(static_cast<Eigen::Index>(model.boundary_size()));
    Eigen::Index i = 0;
    for (std::size_t k = 0; k < model.blocks(); ++k) {
        double const l = model.length(k);
        bd(i++) = x(k, 0.0);
        bd(i++) = x(k, l);
        if (!model.first_order()) {
            bd(i++) = x.derivative(k, 0.0);
            bd(i++) = x.derivative(k, l);
        }
    }
    return bd;
}

/// Columns = boundary_values of each element.
inline ComplexMatrix boundary_matrix(std::span<DomainElement const> xs) {
    if (xs.empty()) return ComplexMatrix(0, 0);
    ComplexMatrix out(static_cast<Eigen::Index>(xs.front().model().boundary_size()), static_cast<Eigen::Index>(xs.size()));
    for (std::size_t j = 0; j < xs.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = boundary_values(xs[j]);
    return out;
}

// ---------------------------------------------------------------------------
// Inner products

namespace detail {

struct AtomKey {
    int power;
    double re, im;
    friend bool operator<(AtomKey const& a, AtomKey const& b) {
        if (a.power != b.power) return a.power < b.power;
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

/// Coefficients of the elements over the distinct atoms of one block.
struct AtomTable {
    std::map<AtomKey, Eigen::Index> index;
    std::vector<AtomKey> atoms;

    void add(TermList const& terms) {
        for (auto const& e : terms) {
            AtomKey const k{e.power, e.rate.real(), e.rate.imag()};
            if (index.emplace(k, static_cast<Eigen::Index>(atoms.size())).second) atoms.push_back(k);
        }
    }
    /// Columns follow `cols`, the indices of the elements used.
    ComplexMatrix coefficients(std::span<DomainElement const> xs, std::vector<std::size_t> const& cols, std::size_t block) const {
        ComplexMatrix c = ComplexMatrix::Zero(static_cast<Eigen::Index>(atoms.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (auto const& e : xs[cols[j]].terms(block))
                c(index.at({e.power, e.rate.real(), e.rate.imag()}), static_cast<Eigen::Index>(j)) += e.coef;
        return c;
    }
};

inline std::vector<std::size_t> nonempty_on(std::span<DomainElement const> xs, std::size_t block) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (!xs[j].empty_block(block)) out.push_back(j);
    return out;
}

} // namespace detail

/// G(i, j) = (xs[j], ys[i])_H, so that (sum c_j xs_j, sum d_i ys_i)_H = d^H G c.
///
/// Per block, the distinct atoms t^p e^{a t} are tabulated once on the
/// quadrature nodes and the element Gram is contracted from the atom Gram.
inline ComplexMatrix gram_l2(std::span<DomainElement const> xs, std::span<DomainElement const> ys,
                             std::size_t order_per_unit = 0) {
    auto const nx = static_cast<Eigen::Index>(xs.size());
    auto const ny = static_cast<Eigen::Index>(ys.size());
    ComplexMatrix g = ComplexMatrix::Zero(ny, nx);
    if (xs.empty() || ys.empty()) return g;
    auto const& model = xs.front().model();
    for (auto const& x : xs) x.require_same(xs.front());
    for (auto const& y : ys) y.require_same(xs.front());

    for (std::size_t k = 0; k < model.blocks(); ++k) {
        detail::AtomTable tx, ty;
        for (auto const& x : xs) tx.add(x.terms(k));
        for (auto const& y : ys) ty.add(y.terms(k));
        if (tx.atoms.empty() || ty.atoms.empty()) continue;
        double rx = 0.0, ry = 0.0;
        int px = 0, py = 0;
        for (auto const& a : tx.atoms) {
            rx = std::max(rx, std::hypot(a.re, a.im));
            px = std::max(px, a.power);
        }
        for (auto const& a : ty.atoms) {
            ry = std::max(ry, std::hypot(a.re, a.im));
            py = std::max(py, a.power);
        }
        auto const rule = adaptive_rule(model.length(k), rx + ry, static_cast<std::size_t>(px + py), order_per_unit);
        auto const nn = static_cast<Eigen::Index>(rule.nodes.size());
        auto tabulate = [&](detail::AtomTable const& t) {
            ComplexMatrix a(nn, static_cast<Eigen::Index>(t.atoms.size()));
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                auto const& at = t.atoms[static_cast<std::size_t>(j)];
                cplx const rate{at.re, at.im};
                for (Eigen::Index n = 0; n < nn; ++n) {
                    double const tn = rule.nodes[static_cast<std::size_t>(n)];
                    cplx v = std::exp(rate * tn);
                    if (at.power > 0) v *= std::pow(tn, at.power);
                    a(n, j) = v * std::sqrt(rule.weights[static_cast<std::size_t>(n)]);
                }
            }
            return a;
        };
        ComplexMatrix const ax = tabulate(tx);
        ComplexMatrix const ay = tabulate(ty);
        auto const cx = detail::nonempty_on(xs, k);
        auto const cy = detail::nonempty_on(ys, k);
        ComplexMatrix const vx = ax * tx.coefficients(xs, cx, k);
        ComplexMatrix const vy = ay * ty.coefficients(ys, cy, k);
        ComplexMatrix const gk = vy.adjoint() * vx;
        for (std::size_t j = 0; j < cx.size(); ++j)
            for (std::size_t i = 0; i < cy.size(); ++i)
                g(static_cast<Eigen::Index>(cy[i]), static_cast<Eigen::Index>(cx[j])) += gk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return g;
}

inline ComplexMatrix gram_l2(std::span<DomainElement const> xs) { return gram_l2(xs, xs); }

/// (x, y)_H = int x conj(y), summed over blocks.
inline cplx inner_l2(DomainElement const& x, DomainElement const& y) {
    x.require_same(y);
    DomainElement const xs[] = {x};
    DomainElement const ys[] = {y};
    return gram_l2(xs, ys)(0, 0);
}

inline double norm_l2(DomainElement const& x) { return std::sqrt(std::max(0.0, inner_l2(x, x).real())); }

inline std::vector<DomainElement> apply_T_star(std::span<DomainElement const> xs) {
    std::vector<DomainElement> out;
    out.reserve(xs.size());
    for (auto const& x : xs) out.push_back(apply_T_star(x));
    return out;
}

/// Graph inner product (x, y)_g = (x, y)_H + (T*x, T*y)_H.
inline cplx inner_graph(DomainElement const& x, DomainElement const& y) {
    return inner_l2(x, y) + inner_l2(apply_T_star(x), apply_T_star(y));
}

inline ComplexMatrix gram_graph(std::span<DomainElement const> xs, std::span<DomainElement const> ys) {
    auto const tx = apply_T_star(xs);
    auto const ty = apply_T_star(ys);
    return gram_l2(xs, ys) + gram_l2(std::span<DomainElement const>(tx), std::span<DomainElement const>(ty));
}

inline ComplexMatrix gram_graph(std::span<DomainElement const> xs) { return gram_graph(xs, xs); }

// ---------------------------------------------------------------------------
// Bases

/// Principal branch of sqrt(lambda) (cut along the negative real axis).
inline cplx principal_sqrt(cplx lambda) { return std::sqrt(lambda); }

/// Basis of ker(T* - lambda): e^{i lambda t} per momentum block;
/// {cos(st), sin(st)} with s = principal sqrt(lambda) for Schrodinger ({1, t} at lambda = 0).
inline std::vector<DomainElement> deficiency_basis(ModelOperator const& model, cplx lambda) {
    std::vector<DomainElement> out;
    if (model.first_order()) {
        for (std::size_t k = 0; k < model.blocks(); ++k) out.push_back(DomainElement::atom(model, k, 1.0, 0, I * lambda));
        return out;
    }
    cplx const s = principal_sqrt(lambda);
    if (s == 0.0) {
        out.push_back(DomainElement::atom(model, 0, 1.0, 0, 0.0));
        out.push_back(DomainElement::atom(model, 0, 1.0, 1, 0.0));
        return out;
    }
    std::vector<TermList> c(1), sn(1);
    c[0] = {{0.5, 0, I * s}, {0.5, 0, -I * s}};
    sn[0] = {{-0.5 * I, 0, I * s}, {0.5 * I, 0, -I * s}};
    out.emplace_back(model, std::move(c));
    out.emplace_back(model, std::move(sn));
    return out;
}

/// sin(omega t) on one block.
inline DomainElement sine_mode(ModelOperator const& model, std::size_t block, double omega) {
    std::vector<TermList> b(model.blocks());
    b[block] = {{-0.5 * I, 0, I * omega}, {0.5 * I, 0, -I * omega}};
    return DomainElement(model, std::move(b));
}

struct DomainBasis {
    std::vector<DomainElement> elements;
    double graph_gram_condition = 1.0; // of the raw (pre-orthonormalization) graph Gram
};

/// Truncation of D(T) with n functions per block.
///
/// Momentum blocks: sin(k pi t / l), k = 1..n (unnormalized).
/// Schrodinger: sin(k pi t / l) sin^2(pi t / l), which vanish with their first
/// derivative at both ends, orthonormalized in the graph inner product.
inline DomainBasis domain_basis(ModelOperator const& model, std::size_t n, Tolerances const& tol = default_tolerances()) {
    if (n == 0) throw ConfigError("domain_basis: n must be >= 1");
    DomainBasis out;
    if (model.first_order()) {
        for (std::size_t k = 0; k < model.blocks(); ++k)
            for (std::size_t j = 1; j <= n; ++j)
                out.elements.push_back(sine_mode(model, k, static_cast<double>(j) * pi / model.length(k)));
        auto const g = gram_graph(out.elements);
        auto const s = singular_values(g);
        out.graph_gram_condition = s(0) / s(s.size() - 1);
        return out;
    }
    double const l = model.length(0);
    auto const envelope = product(sine_mode(model, 0, pi / l), sine_mode(model, 0, pi / l));
    std::vector<DomainElement> raw;
    for (std::size_t j = 1; j <= n; ++j) raw.push_back(product(sine_mode(model, 0, static_cast<double>(j) * pi / l), envelope));
    ComplexMatrix const g = gram_graph(raw);
    auto const s = singular_values(g);
    out.graph_gram_condition = s(0) / s(s.size() - 1);
    auto const on = gram_orthonormalize(ComplexMatrix::Identity(g.rows(), g.cols()), g, tol);
    for (Eigen::Index j = 0; j < on.vectors.cols(); ++j) out.elements.push_back(combine(raw, on.vectors.col(j)));
    return out;
}

// ---------------------------------------------------------------------------
// von Neumann decomposition diagnostic

struct VonNeumannReport {
    double dt_vs_plus = 0.0;   // max |(x, y)_g|, x in D(T) truncation, y in ker(T* - i)
    double dt_vs_minus = 0.0;  // ... y in ker(T* + i)
    double plus_vs_minus = 0.0;
    double tolerance = 0.0;

    double max_residual() const { return std::max({dt_vs_plus, dt_vs_minus, plus_vs_minus}); }
    bool ok() const { return max_residual() < tolerance; }
    std::string worst_pair() const {
        if (dt_vs_plus >= dt_vs_minus && dt_vs_plus >= plus_vs_minus) return "D(T) / ker(T*-i)";
        if (dt_vs_minus >= plus_vs_minus) return "D(T) / ker(T*+i)";
        return "ker(T*-i) / ker(T*+i)";
    }
};

/// Graph-orthogonality of D(T), ker(T* - i) and ker(T* + i) at truncation n.
inline VonNeumannReport von_neumann_report(ModelOperator const& model, std::size_t n, Tolerances const& tol = default_tolerances()) {
    auto const dt = domain_basis(model, n, tol).elements;
    auto const kp = deficiency_basis(model, I);
    auto const km = deficiency_basis(model, -I);
    VonNeumannReport r;
    r.tolerance = tol.green;
    r.dt_vs_plus = gram_graph(dt, kp).cwiseAbs().maxCoeff();
    r.dt_vs_minus = gram_graph(dt, km).cwiseAbs().maxCoeff();
    r.plus_vs_minus = gram_graph(kp, km).cwiseAbs().maxCoeff();
    return r;
}

/// As von_neumann_report, throwing DiagnosticFailure on violation.
inline VonNeumannReport von_neumann_check(ModelOperator const& model, std::size_t n, Tolerances const& tol = default_tolerances()) {
    auto r = von_neumann_report(model, n, tol);
    if (!r.ok())
        throw DiagnosticFailure("von Neumann decomposition violated for " + r.worst_pair() +
                                " (|(x,y)_g| = " + std::to_string(r.max_residual()) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// Particular solutions of (T* - lambda) x = y

namespace detail {

/// Solve L(D) [P(t) e^{a t}] = coef t^p e^{a t} for a polynomial P, where
/// L(D + a) = sum_k b[k] D^k. Resonant atoms (b[0] ~ 0) raise the degree of P.
inline TermList solve_atom(std::vector<cplx> const& b, ExpTerm const& rhs, double scale) {
    std::size_t j0 = 0;
    while (j0 + 1 < b.size() && std::abs(b[j0]) <= 1e-13 * scale) ++j0;
    if (std::abs(b[j0]) == 0.0) throw StructuralError("particular_solution: degenerate symbol");
    int const p = rhs.power;
    std::vector<cplx> c(static_cast<std::size_t>(p) + b.size() + 1, 0.0);
    auto falling = [](int q, std::size_t k) { // (q+k)! / q!
        double f = 1.0;
        for (std::size_t i = 1; i <= k; ++i) f *= static_cast<double>(q) + static_cast<double>(i);
        return f;
    };
    for (int q = p; q >= 0; --q) {
        cplx acc = (q == p) ? rhs.coef : cplx{};
        for (std::size_t k = j0 + 1; k < b.size(); ++k) acc -= b[k] * falling(q, k) * c[static_cast<std::size_t>(q) + k];
        c[static_cast<std::size_t>(q) + j0] = acc / (b[j0] * falling(q, j0));
    }
    TermList out;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0.0) out.push_back({c[i], static_cast<int>(i), rhs.rate});
    return out;
}

} // namespace detail

/// Some x in the representation subspace with (T* - lambda) x = y; no boundary
/// conditions imposed. Solved atom by atom in closed form.
inline DomainElement particular_solution(DomainElement const& y, cplx lambda) {
    auto const& model = y.model();
    std::vector<TermList> out(model.blocks());
    for (std::size_t k = 0; k < model.blocks(); ++k) {
        for (auto const& e : y.terms(k)) {
            cplx const a = e.rate;
            std::vector<cplx> b;
            double scale = 1.0 + std::abs(lambda);
            if (model.first_order()) {
                b = {-I * a - lambda, -I}; // -i (D + a) - lambda
                scale += std::abs(a);
            } else {
                b = {-a * a - lambda, -2.0 * a, -1.0}; // -(D + a)^2 - lambda
                scale += std::norm(a);
            }
            auto const terms = detail::solve_atom(b, e, scale);
            out[k].insert(out[k].end(), terms.begin(), terms.end());
        }
    }
    return DomainElement(model, std::move(out));
}

} // namespace saext
