#pragma once

// Suite runner. Each suite expands into independent items that run on a
// worker pool; results are stored by item index, so the assembled report does
// not depend on scheduling.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

#include "config.hpp"
#include "spectra.hpp"

namespace saext {

inline std::vector<std::string> const& suite_names() {
    static std::vector<std::string> const s{"green-check",     "weyl-scan",     "krein-check", "spectrum",
                                            "embedding-probe", "thm2-families", "kuiper-check"};
    return s;
}

struct Check {
    std::string name;
    std::string status;            // pass | fail | error | skipped
    double value = 0.0;
    std::optional<double> lo, hi;  // pass iff lo <= value <= hi
    std::string message;
    Json details = Json::object();

    bool failed() const { return status == "fail" || status == "error"; }
};

inline Check make_check(std::string name, double value, std::optional<double> lo, std::optional<double> hi,
                        Json details = Json::object()) {
    Check c{std::move(name), "pass", value, lo, hi, {}, std::move(details)};
    bool ok = std::isfinite(value);
    if (lo && !(value >= *lo)) ok = false;
    if (hi && !(value <= *hi)) ok = false;
    c.status = ok ? "pass" : "fail";
    return c;
}

inline Check below(std::string name, double value, double tol, Json details = Json::object()) {
    return make_check(std::move(name), value, std::nullopt, tol, std::move(details));
}

inline Check above(std::string name, double value, double bound, Json details = Json::object()) {
    return make_check(std::move(name), value, bound, std::nullopt, std::move(details));
}

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ItemResult {
    std::vector<Check> checks;
    std::vector<Series> series;
};

struct Timing {
    std::string item;
    double seconds = 0.0;
};

struct RunReport {
    std::string suite;
    std::string model_id;
    Json config;
    std::vector<Check> checks;
    std::vector<Series> series;
    std::vector<Timing> timings;       // not part of the canonical JSON
    std::vector<std::string> artifacts;
    double total_seconds = 0.0;

    bool all_pass() const {
        return std::none_of(checks.begin(), checks.end(), [](Check const& c) { return c.failed(); });
    }
    std::size_t count(char const* status) const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [&](Check const& c) { return c.status == status; }));
    }
};

namespace detail {

struct Item {
    std::string name;
    std::function<ItemResult()> run;
};

/// FNV-1a, so per-item seeds do not depend on the standard library's hash.
inline std::uint64_t fnv1a(std::string const& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t item_seed(ExperimentConfig const& c, std::string const& item) { return fnv1a(item, c.seed ^ 0x9e3779b97f4a7c15ull); }

inline std::string fmt_lambda(cplx l) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g%+gi", l.real(), l.imag());
    return buf;
}

inline Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json matrix_json(ComplexMatrix const& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.push_back(cplx_json(a(i, j)));
        rows.push_back(r);
    }
    return rows;
}

inline BoundaryTriplet triplet_for(ExperimentConfig const& c, ModelOperator const& m) {
    bool const reg = c.triplet == TripletChoice::regularized ||
                     (c.triplet == TripletChoice::automatic && m.kind() == ModelKind::direct_sum);
    return reg ? regularized_direct_sum_triplet(m, c.tol) : standard_triplet(m, c.tol);
}

/// Unit-norm random element spanned by interior modes, deficiency solutions at
/// a few points and a polynomial atom on every block.
inline DomainElement random_element(ModelOperator const& m, Rng& rng) {
    std::vector<DomainElement> parts = domain_basis(m, 4).elements;
    for (cplx l : {I, -I, cplx{0.5, 1.5}, cplx{-1.0, 0.25}}) {
        auto const k = deficiency_basis(m, l);
        parts.insert(parts.end(), k.begin(), k.end());
    }
    for (std::size_t b = 0; b < m.blocks(); ++b) parts.push_back(DomainElement::atom(m, b, 1.0, 1, 0.0));
    ComplexVector c(static_cast<Eigen::Index>(parts.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.complex_normal();
    DomainElement x = combine(parts, c);
    return (1.0 / norm_l2(x)) * x;
}

/// Random element of the D(T) truncation.
inline DomainElement random_dt_element(ModelOperator const& m, Rng& rng, std::size_t n = 6) {
    auto const parts = domain_basis(m, n).elements;
    ComplexVector c(static_cast<Eigen::Index>(parts.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.complex_normal();
    DomainElement x = combine(parts, c);
    return (1.0 / norm_l2(x)) * x;
}

// ---------------------------------------------------------------------------

inline std::vector<Item> green_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    for (auto const& m : c.models) {
        std::string const base = "green-check/" + m.id();
        items.push_back({base, [&c, m, base] {
            ItemResult r;
            auto const tr = triplet_for(c, m);
            Rng rng(item_seed(c, base));
            std::vector<DomainElement> xs;
            for (std::size_t i = 0; i < 2 * c.green_pairs; ++i) xs.push_back(random_element(m, rng));
            double worst = 0.0;
            for (std::size_t p = 0; p < c.green_pairs; ++p) worst = std::max(worst, green_residual(tr, xs[2 * p], xs[2 * p + 1]));
            auto const all = green_report(tr, xs);
            r.checks.push_back(below(base + "/pairs", worst, c.tol.green,
                                     {{"pairs", c.green_pairs}, {"triplet_certified_residual", tr.certified_green_residual}}));
            r.checks.push_back(below(base + "/gamma-pm-form", all.rotated_max_residual, c.tol.green));
            auto const vn = von_neumann_report(m, 8, c.tol);
            r.checks.push_back(below(base + "/von-neumann", vn.max_residual(), c.tol.green, {{"worst", vn.worst_pair()}}));
            return r;
        }});
    }
    return items;
}

inline std::vector<Item> weyl_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    for (auto const& m : c.models)
        for (cplx l : c.lambda_grid) {
            std::string const base = "weyl-scan/" + m.id() + "/" + fmt_lambda(l);
            items.push_back({base, [&c, m, l, base] {
                ItemResult r;
                auto const tr = triplet_for(c, m);
                WeylSample w = [&] {
                    Tolerances loose = c.tol;
                    loose.conj_symmetry = std::numeric_limits<double>::infinity();
                    return weyl_M(tr, l, loose);
                }();
                Json d{{"gamma_residual", w.gamma_residual}};
                if (m.blocks() * m.block_deficiency() <= 4) d["M"] = matrix_json(w.M);
                r.checks.push_back(below(base + "/conj-symmetry", w.conj_symmetry_residual, c.tol.conj_symmetry, d));
                r.checks.push_back(above(base + "/nevanlinna", w.nevanlinna_min, 0.0));

                auto const d0 = weyl_derivative_check(tr, l, 0.0, c.tol);
                double const h1 = 1e-2 * std::abs(l);
                auto const d1 = weyl_derivative_check(tr, l, h1, c.tol);
                auto const d2 = weyl_derivative_check(tr, l, h1 / 2.0, c.tol);
                double const order = std::log2(d1.residual / d2.residual);
                r.checks.push_back(below(base + "/m-prime", d0.residual, c.tol.weyl_derivative, {{"h", d0.h}}));
                r.checks.push_back(make_check(base + "/m-prime-order", order, 1.8, 2.2,
                                              {{"h", h1}, {"residual_h", d1.residual}, {"residual_h_over_2", d2.residual}}));

                auto const b = cayley_B(tr, l, c.tol);
                r.checks.push_back(below(base + "/b-norm", b.norm, 1.0, {{"route_residual", b.route_residual}}));
                if (m.kind() == ModelKind::momentum && m.length(0) == 1.0 && l == I)
                    r.checks.push_back(below(base + "/b-spot", std::abs(b.B(0, 0) + std::exp(-1.0)), 1e-9,
                                             {{"B", cplx_json(b.B(0, 0))}}));

                auto const ic = index_check_M_prime(tr, l, c.tol);
                double const bad = static_cast<double>(ic.kernel) + std::abs(static_cast<double>(ic.index)) +
                                   std::abs(static_cast<double>(ic.n_lambda + ic.index)) + (ic.ambiguous ? 1.0 : 0.0);
                r.checks.push_back(below(base + "/index", bad, 0.0,
                                         {{"kernel", ic.kernel}, {"cokernel", ic.cokernel}, {"index", ic.index},
                                          {"n_lambda", ic.n_lambda}, {"ambiguous", ic.ambiguous}}));
                return r;
            }});
        }
    return items;
}

inline std::vector<Item> krein_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    for (auto const& m : c.models) {
        for (auto const& fam : c.unitaries)
            for (cplx l : c.lambda_grid) {
                std::string const base = "krein-check/" + m.id() + "/" + fam.spec + "/" + fmt_lambda(l);
                items.push_back({base, [&c, m, fam, l, base] {
                    ItemResult r;
                    auto const tr = triplet_for(c, m);
                    auto const ext = extension_from_unitary(tr, fam.build(tr.m()), fam.spec, c.tol);
                    Rng rng(item_seed(c, base));
                    auto const y = random_element(m, rng);
                    auto const p = krein_residual(ext, l, y, c.tol);
                    r.checks.push_back(below(base + "/krein", p.residual, c.tol.krein,
                                             {{"lhs_equation_residual", p.lhs_equation_residual},
                                              {"lhs_membership_residual", p.lhs_membership_residual}}));
                    r.checks.push_back(below(base + "/adjoint-routes", p.adjoint_route_residual, c.tol.krein));
                    return r;
                }});
            }
        for (cplx l : c.lambda_grid) {
            std::string const base = "krein-check/" + m.id() + "/annihilation/" + fmt_lambda(l);
            items.push_back({base, [&c, m, l, base] {
                ItemResult r;
                auto const tr = triplet_for(c, m);
                Rng rng(item_seed(c, base));
                double worst = 0.0, ratio = 0.0;
                for (std::size_t i = 0; i < c.annihilation_vectors; ++i) {
                    auto const x = random_dt_element(m, rng);
                    auto const y = apply_T_star(x) - l * x;
                    auto const a = gamma_minus_adjoint(tr, l, y, c.tol);
                    double const ny = norm_l2(y);
                    worst = std::max({worst, a.value.norm() / ny, a.direct.norm() / ny});
                    ratio = std::max(ratio, resolvent_T_plus(tr, l, y, c.tol).norm_ratio);
                }
                r.checks.push_back(below(base, worst, c.tol.annihilation, {{"vectors", c.annihilation_vectors}}));
                r.checks.push_back(below(base + "/resolvent-bound", ratio, 1.0 + 1e-10));
                return r;
            }});
            std::string const dbase = "krein-check/" + m.id() + "/decomposition/" + fmt_lambda(l);
            items.push_back({dbase, [&c, m, l, dbase] {
                ItemResult r;
                auto const tr = triplet_for(c, m);
                auto const& fam = c.unitaries.front();
                auto const ext = extension_from_unitary(tr, fam.build(tr.m()), fam.spec, c.tol);
                Rng rng(item_seed(c, dbase));
                // x in D(T_U): interior part plus boundary functions satisfying the condition
                std::vector<DomainElement> reps = deficiency_basis(m, I);
                auto const km = deficiency_basis(m, -I);
                reps.insert(reps.end(), km.begin(), km.end());
                auto const ns = nullspace(ext.condition * boundary_matrix(reps), c.tol.rank);
                DomainElement x = random_dt_element(m, rng);
                for (Eigen::Index j = 0; j < ns.basis.cols(); ++j) x += rng.complex_normal() * combine(reps, ns.basis.col(j));
                auto const d = domain_decompose(ext, l, x, c.tol);
                r.checks.push_back(below(dbase + "/linkage", d.linkage_residual, c.tol.krein, {{"family", fam.spec}}));
                r.checks.push_back(below(dbase + "/reassembly", d.reassembly_residual, c.tol.krein));
                r.checks.push_back(below(dbase + "/range", d.range_residual, c.tol.krein));
                return r;
            }});
        }
    }
    return items;
}

inline std::vector<Item> spectrum_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    for (auto const& m : c.models)
        for (auto const& fam : c.unitaries) {
            std::string const base = "spectrum/" + m.id() + "/" + fam.spec;
            items.push_back({base, [&c, m, fam, base] {
                ItemResult r;
                auto const tr = triplet_for(c, m);
                auto const ext = extension_from_unitary(tr, fam.build(tr.m()), fam.spec, c.tol);
                if (!ext.has_phases() && tr.m() > 4) {
                    Check s{base, "skipped", 0.0, std::nullopt, std::nullopt,
                            "general U on direct sums is supported for m <= 4 only", Json::object()};
                    r.checks.push_back(s);
                    return r;
                }
                auto const sp = extension_spectrum(ext, c.window_lo, c.window_hi, c.tol);
                r.checks.push_back(below(base + "/reality", sp.max_imag, c.tol.eigen_imag, {{"method", sp.method}}));
                r.checks.push_back(below(base + "/unresolved", static_cast<double>(sp.unresolved.size()), 0.0));
                if (sp.method != "closed-form") r.checks.push_back(below(base + "/root-residual", sp.root_residual, 1e-8));

                Series s{"spectrum-" + m.id() + "-" + fam.spec, {"block", "n_index", "value", "multiplicity"}, {}};
                for (auto const& e : sp.entries)
                    s.rows.push_back({static_cast<double>(e.block), static_cast<double>(e.index), e.value,
                                      static_cast<double>(e.multiplicity)});
                r.series.push_back(std::move(s));

                Series cs{"counting-" + m.id() + "-" + fam.spec, {"Lambda", "N"}, {}};
                double const cap_max = std::min(-c.window_lo, c.window_hi);
                std::size_t prev = 0;
                bool monotone = true;
                for (int j = 0; j <= 16 && cap_max > 0.0; ++j) {
                    double const cap = cap_max * j / 16.0;
                    std::size_t const n = counting_function(sp, cap, c.tol);
                    monotone = monotone && n >= prev;
                    prev = n;
                    cs.rows.push_back({cap, static_cast<double>(n)});
                }
                r.series.push_back(std::move(cs));
                r.checks.push_back(below(base + "/counting-monotone", monotone ? 0.0 : 1.0, 0.0));

                auto const g = galerkin_spectrum(ext, c.n, c.tol);
                r.checks.push_back(below(base + "/galerkin-hermiticity", g.hermiticity_residual, c.tol.hermitian,
                                         {{"basis_size", g.basis_size}, {"mass_condition", g.mass_condition}}));
                auto vals = sp.values();
                std::stable_sort(vals.begin(), vals.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
                double worst = 0.0;
                std::size_t const k = std::min(c.galerkin_match, vals.size());
                Json matched = Json::array();
                for (std::size_t i = 0; i < k; ++i) {
                    double best = std::numeric_limits<double>::infinity();
                    for (double v : g.values) best = std::min(best, std::abs(v - vals[i]));
                    double const rel = best / std::max(1.0, std::abs(vals[i]));
                    worst = std::max(worst, rel);
                    matched.push_back({vals[i], rel});
                }
                r.checks.push_back(below(base + "/galerkin-match", worst, 1e-4, {{"matched", matched}, {"n", c.n}}));
                return r;
            }});
        }
    return items;
}

inline std::vector<Item> embedding_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    for (auto const& m : c.models) {
        std::string const base = "embedding-probe/" + m.id();
        items.push_back({base, [&c, m, base] {
            ItemResult r;
            bool monotone = true;
            for (std::size_t n : c.embedding_levels) {
                auto const e = embedding_singular_values(m, n, c.tol);
                Series s{"embedding-" + m.id() + "-n" + std::to_string(n), {"k", "sigma"}, {}};
                for (std::size_t k = 0; k < e.sigma.size(); ++k) {
                    s.rows.push_back({static_cast<double>(k + 1), e.sigma[k]});
                    if (k > 0 && e.sigma[k] > e.sigma[k - 1] * (1.0 + 1e-12)) monotone = false;
                }
                r.series.push_back(std::move(s));
                if (m.kind() == ModelKind::momentum) {
                    double const l = m.length(0);
                    double err = 0.0;
                    for (std::size_t k = 0; k < e.sigma.size(); ++k) {
                        double const w = static_cast<double>(k + 1) * pi / l;
                        err = std::max(err, std::abs(e.sigma[k] - 1.0 / std::sqrt(1.0 + w * w)));
                    }
                    std::string const lv = base + "/n" + std::to_string(n);
                    r.checks.push_back(below(lv + "/closed-form", err, 1e-10));
                    if (n == c.embedding_levels.back())
                        r.checks.push_back(below(lv + "/decay-slope", std::abs(e.decay.slope + 1.0), 0.02,
                                                 {{"slope", e.decay.slope}, {"stderr", e.decay.slope_stderr}, {"r2", e.decay.r2}}));
                }
            }
            r.checks.push_back(below(base + "/sigma-monotone", monotone ? 0.0 : 1.0, 0.0));

            auto const mi = regularity_margin(m, I, 16, c.tol);
            r.checks.push_back(above(base + "/regularity-margin-i", mi.margin, 1.0 - 1e-8));
            auto const m0 = regularity_margin(m, 0.0, 16, c.tol);
            Json d{{"margin", m0.margin}};
            if (!m0.per_block.empty()) d["per_block"] = m0.per_block;
            double const floor0 = m.first_order() ? pi / *std::max_element(m.lengths().begin(), m.lengths().end()) * (1.0 - 1e-8) : 0.0;
            r.checks.push_back(make_check(base + "/regularity-margin-0", m0.margin, floor0, std::nullopt, d));
            return r;
        }});
    }
    return items;
}

inline std::vector<Item> thm2_items(ExperimentConfig const& c) {
    std::vector<Item> items;
    struct Fam {
        char const* name;
        std::vector<cplx> (*rule)(std::size_t);
    };
    for (Fam f : {Fam{"minus-i", families::minus_i}, Fam{"pi-over-k", families::pi_over_k}, Fam{"minus-one", families::minus_one}}) {
        std::string const base = std::string("thm2-families/") + f.name;
        items.push_back({base, [&c, f, base] {
            ItemResult r;
            double const window = std::min(-c.window_lo, c.window_hi);
            auto const rep = compactness_report(f.rule, f.name, c.k_levels, window, c.fit_from, c.tol);
            for (auto const& lv : rep.levels) {
                Series s{std::string("thm2-") + f.name + "-K" + std::to_string(lv.K), {"k", "lambda_min", "tail"}, {}};
                for (std::size_t k = 0; k < lv.K; ++k) s.rows.push_back({static_cast<double>(k + 1), lv.lambda_min[k], lv.tail[k]});
                r.series.push_back(std::move(s));
                Series n{std::string("thm2-") + f.name + "-K" + std::to_string(lv.K) + "-counting", {"Lambda", "N"}, {}};
                for (auto const& [cap, cnt] : lv.counting) n.rows.push_back({cap, static_cast<double>(cnt)});
                r.series.push_back(std::move(n));
            }
            auto const& top = rep.levels.back();
            std::string const name = f.name;
            if (name == "minus-i") {
                double const v = top.lambda_min.back();
                r.checks.push_back(below(base + "/bounded", std::abs(v - 1.0), 0.02,
                                         {{"K", top.K}, {"lambda_min_at_K", v}, {"u_minus_id_norm", top.u_minus_id_norm}}));
            } else if (name == "pi-over-k") {
                double const target = std::abs(2.0 * std::atan(pi) - pi);
                if (!rep.growth) throw ConfigError("thm2-families: largest K level too small for the growth fit");
                double const rel = std::abs(rep.growth->slope - target) / target;
                Json d{{"slope", rep.growth->slope}, {"target", target}, {"r2", rep.growth->r2}, {"stderr", rep.growth->slope_stderr}};
                r.checks.push_back(below(base + "/growth-slope", rel, 0.05, d));
                r.checks.push_back(above(base + "/growth-r2", rep.growth->r2, 0.99));
            } else {
                double bad = 0.0;
                Json mult = Json::array();
                for (auto const& lv : rep.levels) {
                    bad += std::abs(static_cast<double>(lv.zero_multiplicity) - static_cast<double>(lv.K));
                    mult.push_back({lv.K, lv.zero_multiplicity});
                }
                r.checks.push_back(below(base + "/zero-multiplicity", bad, 0.0, {{"K_vs_multiplicity", mult}}));
            }
            return r;
        }});
    }
    return items;
}

inline std::vector<Item> kuiper_items(ExperimentConfig const& c) {
    std::string const base = "kuiper-check";
    return {{base, [&c, base] {
        ItemResult r;
        auto const rep = kuiper_check(item_seed(c, base), c.kuiper_trials, c.kuiper_dim, c.tol);
        double min_half = 1e300, min_neg = 1e300, max_norm = 0.0, min_gap = 1e300;
        Series s{"kuiper-trials", {"trial", "a_norm", "sigma_half_sum", "sigma_neg", "bound_gap"}, {}};
        for (std::size_t t = 0; t < rep.trials.size(); ++t) {
            auto const& k = rep.trials[t];
            min_half = std::min(min_half, k.sigma_half_sum);
            min_neg = std::min(min_neg, k.sigma_neg);
            max_norm = std::max(max_norm, k.a_norm);
            min_gap = std::min(min_gap, k.bound_gap);
            s.rows.push_back({static_cast<double>(t), k.a_norm, k.sigma_half_sum, k.sigma_neg, k.bound_gap});
        }
        r.series.push_back(std::move(s));
        r.checks.push_back(above(base + "/sigma-half-sum", min_half, 0.0, {{"trials", rep.trials.size()}}));
        r.checks.push_back(above(base + "/sigma-neg", min_neg, 0.0));
        r.checks.push_back(below(base + "/a-norm", max_norm, std::log(3.0)));
        r.checks.push_back(above(base + "/exp-bound", min_gap, -1e-12));
        return r;
    }}};
}

inline std::vector<Item> suite_items(ExperimentConfig const& c, std::string const& suite) {
    if (suite == "green-check") return green_items(c);
    if (suite == "weyl-scan") return weyl_items(c);
    if (suite == "krein-check") return krein_items(c);
    if (suite == "spectrum") return spectrum_items(c);
    if (suite == "embedding-probe") return embedding_items(c);
    if (suite == "thm2-families") return thm2_items(c);
    if (suite == "kuiper-check") return kuiper_items(c);
    if (suite == "all") {
        std::vector<Item> all;
        for (auto const& s : suite_names()) {
            auto v = suite_items(c, s);
            all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
        }
        return all;
    }
    throw ConfigError("unknown suite '" + suite + "'");
}

} // namespace detail

inline std::string models_id(ExperimentConfig const& c) {
    std::string id;
    for (auto const& m : c.models) id += (id.empty() ? "" : "_") + m.id();
    return id;
}

/// Run one suite (or "all"). Items that throw are recorded as errors; the others continue.
inline RunReport execute_experiment(ExperimentConfig const& config, std::string const& suite) {
    using clock = std::chrono::steady_clock;
    auto const t0 = clock::now();
    set_default_quadrature_order(config.quadrature_order);
    auto items = detail::suite_items(config, suite);
    std::vector<ItemResult> results(items.size());
    std::vector<double> seconds(items.size(), 0.0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            auto const s = clock::now();
            try {
                results[i] = items[i].run();
            } catch (std::exception const& e) {
                Check c{items[i].name, "error", std::numeric_limits<double>::quiet_NaN(), std::nullopt, std::nullopt, e.what(),
                        Json::object()};
                results[i] = ItemResult{{c}, {}};
            }
            seconds[i] = std::chrono::duration<double>(clock::now() - s).count();
        }
    };
    std::size_t const nw = std::max<std::size_t>(1, std::min(config.workers, items.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    RunReport rep;
    rep.suite = suite;
    rep.model_id = models_id(config);
    rep.config = config_echo(config);
    for (std::size_t i = 0; i < items.size(); ++i) {
        rep.checks.insert(rep.checks.end(), results[i].checks.begin(), results[i].checks.end());
        rep.series.insert(rep.series.end(), results[i].series.begin(), results[i].series.end());
        rep.timings.push_back({items[i].name, seconds[i]});
    }
    rep.total_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
}

} // namespace saext
