#pragma once

// Experiment configuration: a JSON document with a versioned schema.
//
//   {
//     "schema_version": 1,
//     "seed": 12345,                                  (required)
//     "model": {"kind": "momentum", "length": 1}      or "models": [ ... ]
//              {"kind": "direct-sum", "K": 4}         (lengths 1/k) or "lengths": [...]
//     "triplet": "auto" | "standard" | "regularized",
//     "unitaries": ["identity", "phase:-pi/2", ...],
//     "lambda_grid": [[0, 1], [0, 2]],                ([re, im], Im > 0)
//     "truncation": {"n": 64, "quadrature_order": 64},
//     "window": [-50, 50],
//     "k_levels": [8, 16, 32, 64],
//     "tolerances": {"krein": 1e-8, ...},
//     "output": {"dir": ".", "format": "json"},
//     "workers": 1,
//     "green_pairs": 32, "annihilation_vectors": 16, "kuiper_trials": 100,
//     "kuiper_dim": 8, "embedding_levels": [16, 32, 64, 128], "galerkin_match": 5,
//     "fit_from": 8
//   }

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "models.hpp"
#include "unitary_catalog.hpp"

namespace saext {

using Json = nlohmann::json;

enum class TripletChoice { automatic, standard, regularized };

inline char const* to_string(TripletChoice t) {
    switch (t) {
    case TripletChoice::automatic: return "auto";
    case TripletChoice::standard: return "standard";
    case TripletChoice::regularized: return "regularized";
    }
    return "?";
}

struct ExperimentConfig {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::vector<ModelOperator> models;
    TripletChoice triplet = TripletChoice::automatic;
    std::vector<UnitaryFamily> unitaries;
    std::vector<cplx> lambda_grid;
    std::size_t n = 64;
    std::size_t quadrature_order = 64;
    double window_lo = -50.0, window_hi = 50.0;
    std::vector<std::size_t> k_levels{8, 16, 32, 64};
    Tolerances tol;
    std::string out_dir = ".";
    std::string format = "json";
    std::size_t workers = 1;
    std::size_t green_pairs = 32;
    std::size_t annihilation_vectors = 16;
    std::size_t kuiper_trials = 100;
    std::size_t kuiper_dim = 8;
    std::vector<std::size_t> embedding_levels{16, 32, 64, 128};
    std::size_t galerkin_match = 5;
    std::size_t fit_from = 8;
};

inline std::vector<std::pair<char const*, double Tolerances::*>> const& tolerance_fields() {
    static std::vector<std::pair<char const*, double Tolerances::*>> const f{
        {"hermitian", &Tolerances::hermitian},
        {"unitary", &Tolerances::unitary},
        {"pencil_pd", &Tolerances::pencil_pd},
        {"pencil_residual", &Tolerances::pencil_residual},
        {"rank", &Tolerances::rank},
        {"orthonormal", &Tolerances::orthonormal},
        {"drop", &Tolerances::drop},
        {"green", &Tolerances::green},
        {"gamma", &Tolerances::gamma},
        {"conj_symmetry", &Tolerances::conj_symmetry},
        {"weyl_derivative", &Tolerances::weyl_derivative},
        {"krein", &Tolerances::krein},
        {"annihilation", &Tolerances::annihilation},
        {"membership", &Tolerances::membership},
        {"eigen_imag", &Tolerances::eigen_imag},
        {"galerkin_cond", &Tolerances::galerkin_cond},
        {"root", &Tolerances::root},
        {"phase_singular", &Tolerances::phase_singular},
        {"count_tie", &Tolerances::count_tie},
    };
    return f;
}

namespace detail {

/// Object reader that remembers its JSON-pointer path and which keys were consumed.
class Node {
public:
    Node(Json const& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    [[noreturn]] void fail(std::string const& why) const { throw ConfigError(where() + ": " + why); }
    std::string where() const { return path_.empty() ? "/" : path_; }
    std::string child(std::string const& key) const { return path_ + "/" + key; }

    bool has(char const* key) {
        used_.insert(key);
        return j_.contains(key);
    }
    Json const& get(char const* key) {
        used_.insert(key);
        if (!j_.contains(key)) fail(std::string("missing required key '") + key + "'");
        return j_.at(key);
    }

    double number(char const* key, double fallback) {
        if (!has(key)) return fallback;
        auto const& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
        return v.get<double>();
    }
    std::size_t count(char const* key, std::size_t fallback, std::size_t min = 1) {
        if (!has(key)) return fallback;
        return as_count(j_.at(key), child(key), min);
    }
    std::string text(char const* key, std::string fallback) {
        if (!has(key)) return fallback;
        auto const& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
        return v.get<std::string>();
    }

    static std::size_t as_count(Json const& v, std::string const& path, std::size_t min) {
        if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
            throw ConfigError(path + ": expected an integer >= " + std::to_string(min));
        return static_cast<std::size_t>(v.get<long long>());
    }

    /// Rejects keys that were never read.
    void finish() const {
        for (auto const& [k, v] : j_.items())
            if (!used_.count(k)) throw ConfigError(child(k) + ": unknown key '" + k + "'");
    }

private:
    Json const& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline ModelOperator parse_model(Json const& j, std::string const& path) {
    Node n(j, path);
    std::string const kind = n.text("kind", "");
    ModelOperator out = [&] {
        if (kind == "momentum" || kind == "schrodinger") {
            double const l = n.number("length", 1.0);
            if (!(l > 0.0)) throw ConfigError(n.child("length") + ": must be positive");
            return build_model(kind == "momentum" ? ModelKind::momentum : ModelKind::schrodinger, {l});
        }
        if (kind == "direct-sum") {
            if (n.has("lengths")) {
                auto const& ls = n.get("lengths");
                if (!ls.is_array() || ls.empty()) throw ConfigError(n.child("lengths") + ": expected a nonempty array");
                std::vector<double> v;
                for (std::size_t i = 0; i < ls.size(); ++i) {
                    if (!ls[i].is_number() || !(ls[i].get<double>() > 0.0))
                        throw ConfigError(n.child("lengths") + "/" + std::to_string(i) + ": expected a positive number");
                    v.push_back(ls[i].get<double>());
                }
                return build_model(ModelKind::direct_sum, std::move(v));
            }
            return build_direct_sum(n.count("K", 4));
        }
        if (kind.empty()) throw ConfigError(n.child("kind") + ": missing model kind");
        throw ConfigError(n.child("kind") + ": unknown model '" + kind + "' (momentum, schrodinger, direct-sum)");
    }();
    n.finish();
    return out;
}

inline std::vector<std::size_t> parse_counts(Json const& v, std::string const& path, std::size_t min) {
    if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a nonempty array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Node::as_count(v[i], path + "/" + std::to_string(i), min));
    return out;
}

} // namespace detail

/// Parse and validate a configuration document; defaults are filled in and
/// unknown keys are rejected with their path.
inline ExperimentConfig parse_config(std::string const& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (Json::parse_error const& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    detail::Node root(doc, "");

    auto const& sv = root.get("schema_version");
    if (!sv.is_number_integer() || sv.get<int>() != 1) throw ConfigError("/schema_version: only version 1 is supported");

    auto const& seed = root.get("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("/seed: expected a nonnegative integer");
    c.seed = seed.get<std::uint64_t>();

    bool const one = root.has("model"), many = root.has("models");
    if (one == many) throw ConfigError("/: exactly one of 'model' or 'models' is required");
    if (one) {
        c.models.push_back(detail::parse_model(root.get("model"), "/model"));
    } else {
        auto const& ms = root.get("models");
        if (!ms.is_array() || ms.empty()) throw ConfigError("/models: expected a nonempty array");
        for (std::size_t i = 0; i < ms.size(); ++i) c.models.push_back(detail::parse_model(ms[i], "/models/" + std::to_string(i)));
    }

    std::string const tr = root.text("triplet", "auto");
    if (tr == "auto") c.triplet = TripletChoice::automatic;
    else if (tr == "standard") c.triplet = TripletChoice::standard;
    else if (tr == "regularized") c.triplet = TripletChoice::regularized;
    else throw ConfigError("/triplet: expected auto, standard or regularized");
    if (c.triplet == TripletChoice::regularized)
        for (auto const& m : c.models)
            if (!m.first_order()) throw ConfigError("/triplet: regularized triplet requires momentum-type models");

    if (root.has("unitaries")) {
        auto const& us = root.get("unitaries");
        if (!us.is_array() || us.empty()) throw ConfigError("/unitaries: expected a nonempty array");
        for (std::size_t i = 0; i < us.size(); ++i) {
            std::string const path = "/unitaries/" + std::to_string(i);
            if (!us[i].is_string()) throw ConfigError(path + ": expected a family name");
            try {
                c.unitaries.push_back(parse_unitary_family(us[i].get<std::string>()));
            } catch (ConfigError const& e) {
                throw ConfigError(path + ": " + e.what());
            }
        }
    } else {
        c.unitaries.push_back(parse_unitary_family("identity"));
    }

    if (root.has("lambda_grid")) {
        auto const& g = root.get("lambda_grid");
        if (!g.is_array() || g.empty()) throw ConfigError("/lambda_grid: expected a nonempty array of [re, im] pairs");
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::string const path = "/lambda_grid/" + std::to_string(i);
            if (!g[i].is_array() || g[i].size() != 2 || !g[i][0].is_number() || !g[i][1].is_number())
                throw ConfigError(path + ": expected [re, im]");
            cplx const l{g[i][0].get<double>(), g[i][1].get<double>()};
            if (!(l.imag() > 0.0))
                throw ConfigError(path + ": Im lambda must be > 0 (entry [" + std::to_string(l.real()) + ", " +
                                  std::to_string(l.imag()) + "])");
            c.lambda_grid.push_back(l);
        }
    } else {
        c.lambda_grid = {I, 2.0 * I};
    }

    if (root.has("truncation")) {
        detail::Node t(root.get("truncation"), "/truncation");
        c.n = t.count("n", c.n, 4);
        c.quadrature_order = t.count("quadrature_order", c.quadrature_order, 8);
        t.finish();
    }

    if (root.has("window")) {
        auto const& w = root.get("window");
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number() || !(w[0].get<double>() < w[1].get<double>()))
            throw ConfigError("/window: expected [lo, hi] with lo < hi");
        c.window_lo = w[0].get<double>();
        c.window_hi = w[1].get<double>();
    }

    if (root.has("k_levels")) c.k_levels = detail::parse_counts(root.get("k_levels"), "/k_levels", 1);
    if (root.has("embedding_levels")) c.embedding_levels = detail::parse_counts(root.get("embedding_levels"), "/embedding_levels", 4);

    if (root.has("tolerances")) {
        detail::Node t(root.get("tolerances"), "/tolerances");
        for (auto const& [name, field] : tolerance_fields()) {
            double const v = t.number(name, c.tol.*field);
            if (!(v > 0.0)) throw ConfigError(t.child(name) + ": tolerance must be positive");
            c.tol.*field = v;
        }
        t.finish();
    }

    if (root.has("output")) {
        detail::Node o(root.get("output"), "/output");
        c.out_dir = o.text("dir", c.out_dir);
        c.format = o.text("format", c.format);
        o.finish();
    }
    if (c.format != "json" && c.format != "csv" && c.format != "text")
        throw ConfigError("/output/format: expected json, csv or text");

    c.workers = root.count("workers", c.workers);
    c.green_pairs = root.count("green_pairs", c.green_pairs);
    c.annihilation_vectors = root.count("annihilation_vectors", c.annihilation_vectors);
    c.kuiper_trials = root.count("kuiper_trials", c.kuiper_trials);
    c.kuiper_dim = root.count("kuiper_dim", c.kuiper_dim);
    c.galerkin_match = root.count("galerkin_match", c.galerkin_match);
    c.fit_from = root.count("fit_from", c.fit_from);
    root.finish();
    return c;
}

namespace detail {

inline Json model_json(ModelOperator const& m) {
    Json j;
    j["kind"] = to_string(m.kind());
    j["lengths"] = m.lengths();
    return j;
}

} // namespace detail

/// Canonical echo of the validated configuration (defaults included, output location excluded).
inline Json config_echo(ExperimentConfig const& c) {
    Json j;
    j["schema_version"] = c.schema_version;
    j["seed"] = c.seed;
    j["models"] = Json::array();
    for (auto const& m : c.models) j["models"].push_back(detail::model_json(m));
    j["triplet"] = to_string(c.triplet);
    j["unitaries"] = Json::array();
    for (auto const& u : c.unitaries) j["unitaries"].push_back(u.spec);
    j["lambda_grid"] = Json::array();
    for (auto const& l : c.lambda_grid) j["lambda_grid"].push_back({l.real(), l.imag()});
    j["truncation"] = {{"n", c.n}, {"quadrature_order", c.quadrature_order}};
    j["window"] = {c.window_lo, c.window_hi};
    j["k_levels"] = c.k_levels;
    j["embedding_levels"] = c.embedding_levels;
    Json t;
    for (auto const& [name, field] : tolerance_fields()) t[name] = c.tol.*field;
    j["tolerances"] = t;
    j["green_pairs"] = c.green_pairs;
    j["annihilation_vectors"] = c.annihilation_vectors;
    j["kuiper_trials"] = c.kuiper_trials;
    j["kuiper_dim"] = c.kuiper_dim;
    j["galerkin_match"] = c.galerkin_match;
    j["fit_from"] = c.fit_from;
    return j;
}

} // namespace saext
