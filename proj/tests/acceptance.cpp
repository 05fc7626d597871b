// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <unistd.h>

#include <saext/saext.hpp>

using namespace saext;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(char const* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ModelOperator momentum() { return build_model(ModelKind::momentum, {1.0}); }
ModelOperator schrodinger() { return build_model(ModelKind::schrodinger, {1.0}); }

BoundaryTriplet triplet(ModelOperator const& m) {
    return m.kind() == ModelKind::direct_sum ? regularized_direct_sum_triplet(m) : standard_triplet(m);
}

std::vector<ModelOperator> three_models() { return {momentum(), schrodinger(), build_direct_sum(4)}; }

std::vector<cplx> const grid{cplx(0, 0.25), cplx(0, 0.5), I, cplx(0, 2), cplx(0, 4), cplx(1, 1)};

DomainElement random_element(ModelOperator const& m, Rng& rng) {
    std::vector<TermList> b(m.blocks());
    for (auto& terms : b)
        for (int j = 0; j < 3; ++j)
            terms.push_back({rng.complex_normal(), j % 2, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-6.0, 6.0))});
    return DomainElement(m, std::move(b));
}

Outcome green() {
    auto const t0 = Clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (auto const& m : three_models()) {
        auto const tr = triplet(m);
        for (int p = 0; p < 32; ++p) {
            auto const x = random_element(m, rng), y = random_element(m, rng);
            worst = std::max(worst, green_residual(tr, x, y));
        }
    }
    double const t = seconds_since(t0);
    return {worst < 1e-10 && t < 5.0, fmt("max residual %.3e, %.2f s", worst, t)};
}

Outcome nevanlinna() {
    double sym = 0.0, min_im = 1e300;
    Tolerances loose;
    loose.conj_symmetry = 1.0;
    for (auto const& m : {momentum(), schrodinger()}) {
        auto const tr = standard_triplet(m);
        for (cplx l : grid) {
            auto const w = weyl_M(tr, l, loose);
            sym = std::max(sym, w.conj_symmetry_residual);
            min_im = std::min(min_im, w.nevanlinna_min);
        }
    }
    return {sym < 1e-10 && min_im > 0.0, fmt("conj symmetry %.3e, min eig Im M / Im l %.3e", sym, min_im)};
}

Outcome derivative() {
    double worst = 0.0, min_order = 1e300, max_order = 0.0;
    for (auto const& m : three_models()) {
        auto const tr = triplet(m);
        for (cplx l : grid) {
            worst = std::max(worst, weyl_derivative_check(tr, l).residual);
            double const h = 1e-2 * std::abs(l);
            double const order =
                std::log2(weyl_derivative_check(tr, l, h).residual / weyl_derivative_check(tr, l, h / 2.0).residual);
            min_order = std::min(min_order, order);
            max_order = std::max(max_order, order);
        }
    }
    return {worst < 1e-6 && min_order > 1.8 && max_order < 2.2,
            fmt("max residual %.3e, observed order in [%.4f, %.4f]", worst, min_order, max_order)};
}

Outcome cayley() {
    double max_norm = 0.0;
    for (auto const& m : three_models())
        for (cplx l : grid) max_norm = std::max(max_norm, cayley_B(triplet(m), l).norm);
    // -i d/dt on [0, 1]: M(i) = i tanh(1/2), so B(i) = (M - i)/(M + i) = -e^{-1}
    double const th = std::tanh(0.5);
    cplx const oracle = (I * th - I) / (I * th + I);
    cplx const b = cayley_B(standard_triplet(momentum()), I).B(0, 0);
    double const spot = std::abs(b + std::exp(-1.0));
    return {max_norm < 1.0 && spot < 1e-9 && std::abs(oracle + std::exp(-1.0)) < 1e-15,
            fmt("max ||B|| %.6f, |B(i) + 1/e| %.3e", max_norm, spot)};
}

Outcome krein() {
    auto const t0 = Clock::now();
    double worst = 0.0, worst_lhs = 0.0;
    std::size_t cases = 0;
    Rng rng(202);
    for (auto const& m : three_models()) {
        auto const tr = triplet(m);
        for (char const* fam : {"identity", "phase:-pi/2", "haar:7", "exp-hermitian:11,0.9"}) {
            auto const ext = extension_from_unitary(tr, parse_unitary_family(fam).build(tr.m()), fam);
            auto const y = random_element(m, rng);
            for (cplx l : {I, 2.0 * I}) {
                auto const p = krein_residual(ext, l, y);
                worst = std::max(worst, p.residual);
                worst_lhs = std::max({worst_lhs, p.lhs_equation_residual, p.lhs_membership_residual});
                ++cases;
            }
        }
    }
    double const t = seconds_since(t0);
    return {cases == 24 && worst < 1e-8 && worst_lhs < 1e-8 && t < 60.0,
            fmt("24 cases, max residual %.3e, direct-solve residual %.3e, %.2f s", worst, worst_lhs, t)};
}

Outcome annihilation() {
    Rng rng(303);
    double worst = 0.0;
    for (auto const& m : three_models()) {
        auto const tr = triplet(m);
        auto const dt = domain_basis(m, 6).elements;
        for (int j = 0; j < 16; ++j) {
            ComplexVector const c = rng.complex_vector(static_cast<Eigen::Index>(dt.size()));
            auto const x = combine(dt, c);
            cplx const l = grid[static_cast<std::size_t>(j) % grid.size()];
            auto const y = apply_T_star(x) - l * x;
            worst = std::max(worst, gamma_minus_adjoint(tr, l, y).value.norm() / norm_l2(y));
        }
    }
    return {worst < 1e-8, fmt("max ||gamma_-(conj l)^* y|| / ||y|| %.3e", worst)};
}

Outcome spectrum() {
    auto const t0 = Clock::now();
    auto const tr = standard_triplet(momentum());
    double worst = 0.0;
    for (cplx u : {cplx(1.0), I, -I}) {
        // e^{i lambda} = -u
        double const theta = std::arg(-u);
        std::vector<double> exact;
        for (int n = -10; n <= 10; ++n) exact.push_back(theta + 2.0 * pi * n);
        std::sort(exact.begin(), exact.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        auto const g = galerkin_spectrum(extension_from_unitary(tr, ComplexMatrix::Constant(1, 1, u)), 64);
        for (int i = 0; i < 5; ++i) {
            double best = 1e300;
            for (double v : g.values) best = std::min(best, std::abs(v - exact[static_cast<std::size_t>(i)]));
            worst = std::max(worst, best / std::abs(exact[static_cast<std::size_t>(i)]));
        }
    }
    double const t = seconds_since(t0);
    return {worst < 1e-4 && t < 10.0, fmt("max relative deviation %.3e, %.2f s", worst, t)};
}

Outcome embedding() {
    auto const p = embedding_singular_values(momentum(), 128);
    double worst = 0.0;
    for (std::size_t k = 0; k < p.sigma.size(); ++k)
        worst = std::max(worst, std::abs(p.sigma[k] - 1.0 / std::sqrt(1.0 + std::pow(static_cast<double>(k + 1) * pi, 2))));
    return {worst < 1e-10 && std::abs(p.decay.slope + 1.0) <= 0.02,
            fmt("max deviation %.3e, slope %.5f", worst, p.decay.slope)};
}

Outcome thm2() {
    auto const t0 = Clock::now();
    std::vector<std::size_t> const levels{8, 16, 32, 64};
    auto const mi = compactness_report(&families::minus_i, "minus-i", levels, 50.0);
    auto const pk = compactness_report(&families::pi_over_k, "pi-over-k", levels, 50.0);
    auto const mo = compactness_report(&families::minus_one, "minus-one", levels, 50.0);
    double const at64 = mi.levels.back().lambda_min.at(63);
    double const target = 2.0 * std::atan(pi) - pi;
    double const slope = pk.growth ? pk.growth->slope : 0.0;
    double const r2 = pk.growth ? pk.growth->r2 : 0.0;
    bool zero_ok = true;
    for (auto const& lv : mo.levels) zero_ok = zero_ok && lv.zero_multiplicity == lv.K;
    double const t = seconds_since(t0);
    bool const ok = std::abs(at64 - 1.0) <= 0.02 && std::abs(slope - std::abs(target)) <= 0.05 * std::abs(target) &&
                    r2 > 0.99 && zero_ok && t < 30.0;
    return {ok, fmt("minus-i lambda_min(64) %.5f; pi-over-k slope %.5f (target %.5f)", at64, slope, std::abs(target)) +
                    fmt(", R2 %.7f; %.2f s; minus-one zero multiplicity ", r2, t) + (zero_ok ? "= K" : "!= K")};
}

Outcome kuiper() {
    auto const rep = kuiper_check(404, 100, 8);
    double s1 = 1e300, s2 = 1e300, amax = 0.0;
    for (auto const& t : rep.trials) {
        s1 = std::min(s1, t.sigma_half_sum);
        s2 = std::min(s2, t.sigma_neg);
        amax = std::max(amax, t.a_norm);
    }
    return {rep.trials.size() == 100 && rep.all_pass() && s1 > 0.0 && s2 > 0.0 && amax < std::log(3.0),
            fmt("max ||A|| %.4f, min sigma of (e^{iA}+Id)/2 %.4f, of (-e^{iA}-Id) %.4f", amax, s1, s2)};
}

Outcome index_consistency() {
    std::size_t cases = 0, bad = 0;
    std::vector<ModelOperator> models{momentum(), schrodinger()};
    for (std::size_t K : {1u, 2u, 4u, 8u, 16u}) models.push_back(build_direct_sum(K));
    for (auto const& m : models) {
        auto const tr = triplet(m);
        for (cplx l : grid) {
            auto const c = index_check_M_prime(tr, l);
            ++cases;
            if (c.kernel != 0 || c.index != 0 || c.n_lambda != -c.index || c.ambiguous) ++bad;
        }
    }
    return {bad == 0, fmt("%.0f cases, %.0f with nonzero kernel, index or n(lambda)", static_cast<double>(cases),
                          static_cast<double>(bad))};
}

std::string read_json_output(fs::path const& dir) {
    for (auto const& e : fs::directory_iterator(dir)) {
        auto const name = e.path().filename().string();
        if (e.path().extension() == ".json" && name.find(".manifest.") == std::string::npos) {
            std::ifstream f(e.path(), std::ios::binary);
            std::stringstream s;
            s << f.rdbuf();
            return s.str();
        }
    }
    return {};
}

Outcome determinism() {
    auto const base = fs::temp_directory_path() / ("saext-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(base);
    std::string out[2];
    int codes[2] = {-1, -1};
    for (int r = 0; r < 2; ++r) {
        auto const dir = base / ("run" + std::to_string(r));
        fs::create_directories(dir);
        std::string const cmd = std::string(SAEXT_BINARY) + " all --config " + SAEXT_CONFIG_DIR + "/all.json --out " +
                                dir.string() + (r == 1 ? " --workers 1" : "") + " > /dev/null 2>&1";
        int const st = std::system(cmd.c_str());
        codes[r] = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
        out[r] = read_json_output(dir);
    }
    fs::remove_all(base);
    bool const same = !out[0].empty() && out[0] == out[1];
    return {same && codes[0] == 0 && codes[1] == 0,
            fmt("exit codes %.0f/%.0f, %.0f bytes, ", codes[0], codes[1], static_cast<double>(out[0].size())) +
                (same ? "identical" : "different")};
}

} // namespace

int main() {
    struct Criterion {
        char const* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> const criteria{
        {"green identity", green},
        {"nevanlinna properties", nevanlinna},
        {"weyl derivative", derivative},
        {"cayley contraction", cayley},
        {"krein formula", krein},
        {"annihilation of Ran(T - l)", annihilation},
        {"spectrum cross-check", spectrum},
        {"compact embedding probe", embedding},
        {"direct-sum trend families", thm2},
        {"kuiper obstruction", kuiper},
        {"index consistency", index_consistency},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (std::exception const& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %2zu  %-28s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
