#include <gtest/gtest.h>

#include <saext/models.hpp>
#include <saext/random.hpp>

using namespace saext;

namespace {

ModelOperator momentum() { return build_model(ModelKind::momentum, {1.0}); }
ModelOperator schrodinger() { return build_model(ModelKind::schrodinger, {1.0}); }

// Plain trapezoid-free reference: 2000-point midpoint rule on a smooth integrand.
cplx midpoint_inner(DomainElement const& x, DomainElement const& y, std::size_t block, double l) {
    std::size_t const n = 200000;
    double const h = l / static_cast<double>(n);
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double const t = (static_cast<double>(i) + 0.5) * h;
        s += std::conj(y(block, t)) * x(block, t);
    }
    return s * h;
}

DomainElement random_element(ModelOperator const& m, Rng& rng) {
    std::vector<TermList> b(m.blocks());
    for (auto& terms : b)
        for (int j = 0; j < 3; ++j)
            terms.push_back({rng.complex_normal(), j % 2, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-6.0, 6.0))});
    return DomainElement(m, std::move(b));
}

} // namespace

TEST(Model, ValidationErrors) {
    EXPECT_THROW(build_model(ModelKind::momentum, {}), ConfigError);
    EXPECT_THROW(build_model(ModelKind::momentum, {-1.0}), ConfigError);
    EXPECT_THROW(build_model(ModelKind::schrodinger, {1.0, 2.0}), ConfigError);
    EXPECT_THROW(build_direct_sum(0), ConfigError);
    auto const ds = build_direct_sum(4);
    EXPECT_EQ(ds.blocks(), 4u);
    EXPECT_DOUBLE_EQ(ds.length(3), 0.25);
    EXPECT_EQ(ds.deficiency_index(), 4u);
    EXPECT_EQ(schrodinger().deficiency_index(), 2u);
    EXPECT_EQ(ds.id(), "direct-sum-K4");
}

TEST(Model, TStarOfExponentials) {
    auto const m = momentum();
    cplx const lambda(1.3, 0.4);
    auto const e = DomainElement::atom(m, 0, 1.0, 0, I * lambda);
    auto const te = apply_T_star(e);
    for (double t : {0.0, 0.3, 1.0}) EXPECT_LT(std::abs(te(0, t) - lambda * e(0, t)), 1e-14);

    // -(t^2 e^{2t})'' = -(2 + 8t + 4t^2) e^{2t}
    auto const s = schrodinger();
    auto const x = DomainElement::atom(s, 0, 1.0, 2, 2.0);
    auto const tx = apply_T_star(x);
    for (double t : {0.0, 0.5, 1.0}) {
        cplx const expect = -(2.0 + 8.0 * t + 4.0 * t * t) * std::exp(2.0 * t);
        EXPECT_LT(std::abs(tx(0, t) - expect), 1e-12);
    }
}

TEST(Model, DerivativeMatchesFiniteDifferences) {
    Rng rng(4);
    auto const x = random_element(momentum(), rng);
    double const h = 1e-5;
    for (double t : {0.2, 0.5, 0.8}) {
        cplx const fd = (x(0, t + h) - x(0, t - h)) / (2.0 * h);
        EXPECT_LT(std::abs(fd - x.derivative(0, t)), 1e-6 * (1.0 + std::abs(fd)));
    }
}

TEST(Model, BoundaryValueLayout) {
    auto const s = schrodinger();
    auto const x = DomainElement::atom(s, 0, 1.0, 1, 0.0); // f = t
    auto const bd = boundary_values(x);
    ASSERT_EQ(bd.size(), 4);
    EXPECT_EQ(bd(0), cplx(0.0));
    EXPECT_EQ(bd(1), cplx(1.0));
    EXPECT_EQ(bd(2), cplx(1.0));
    EXPECT_EQ(bd(3), cplx(1.0));

    auto const ds = build_direct_sum(3);
    auto const y = DomainElement::atom(ds, 2, 1.0, 1, 0.0);
    auto const by = boundary_values(y);
    ASSERT_EQ(by.size(), 6);
    EXPECT_NEAR(by(5).real(), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(by(0), cplx(0.0));
}

TEST(Model, InnerProductsAgainstClosedFormAndMidpointRule) {
    auto const m = momentum();
    auto const s1 = sine_mode(m, 0, pi), s2 = sine_mode(m, 0, 2.0 * pi);
    EXPECT_NEAR(inner_l2(s1, s1).real(), 0.5, 1e-14);
    EXPECT_LT(std::abs(inner_l2(s1, s2)), 1e-14);

    // ||e^{-t}||^2 = (1 - e^{-2}) / 2
    auto const e = DomainElement::atom(m, 0, 1.0, 0, -1.0);
    EXPECT_NEAR(norm_l2(e) * norm_l2(e), 0.5 * (1.0 - std::exp(-2.0)), 1e-14);

    Rng rng(8);
    auto const x = random_element(m, rng), y = random_element(m, rng);
    EXPECT_LT(std::abs(inner_l2(x, y) - midpoint_inner(x, y, 0, 1.0)), 1e-7 * (1.0 + std::abs(inner_l2(x, y))));
}

TEST(Model, GramConvention) {
    Rng rng(12);
    auto const m = build_direct_sum(3);
    std::vector<DomainElement> xs, ys;
    for (int i = 0; i < 3; ++i) xs.push_back(random_element(m, rng));
    for (int i = 0; i < 2; ++i) ys.push_back(random_element(m, rng));
    ComplexMatrix const g = gram_l2(xs, ys);
    ASSERT_EQ(g.rows(), 2);
    ASSERT_EQ(g.cols(), 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(g(i, j) - inner_l2(xs[j], ys[i])), 1e-13);
    ComplexVector const c = rng.complex_vector(3), d = rng.complex_vector(2);
    cplx const lhs = inner_l2(combine(xs, c), combine(ys, d));
    cplx const rhs = (d.adjoint() * g * c)(0, 0);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)));
}

TEST(Model, DeficiencyBasis) {
    for (auto const& m : {momentum(), schrodinger(), build_direct_sum(5)}) {
        for (cplx lambda : {I, -I, cplx(2.0, 0.5)}) {
            auto const ks = deficiency_basis(m, lambda);
            ASSERT_EQ(ks.size(), m.deficiency_index());
            for (auto const& k : ks) {
                auto const r = apply_T_star(k) - lambda * k;
                EXPECT_LT(norm_l2(r), 1e-12 * (1.0 + norm_l2(k)));
            }
        }
    }
    auto const zero = deficiency_basis(schrodinger(), 0.0);
    EXPECT_LT(norm_l2(apply_T_star(zero[0])) + norm_l2(apply_T_star(zero[1])), 1e-15);
}

TEST(Model, DomainBasisHasZeroBoundaryData) {
    for (auto const& m : {momentum(), schrodinger(), build_direct_sum(3)}) {
        auto const b = domain_basis(m, 6);
        EXPECT_EQ(b.elements.size(), 6 * m.blocks());
        double worst = 0.0;
        for (auto const& e : b.elements) worst = std::max(worst, boundary_values(e).cwiseAbs().maxCoeff());
        EXPECT_LT(worst, 1e-12);
    }
    auto const sb = domain_basis(schrodinger(), 5);
    ComplexMatrix const g = gram_graph(sb.elements);
    EXPECT_LT((g - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Model, VonNeumannDecomposition) {
    for (auto const& m : {momentum(), schrodinger(), build_direct_sum(4)}) {
        auto const r = von_neumann_check(m, 8);
        EXPECT_LT(r.max_residual(), 1e-10);
    }
}

TEST(Model, ParticularSolutionIncludingResonance) {
    Rng rng(21);
    for (auto const& m : {momentum(), schrodinger(), build_direct_sum(3)}) {
        cplx const lambda(0.7, 1.1);
        auto const y = random_element(m, rng);
        auto const x = particular_solution(y, lambda);
        EXPECT_LT(norm_l2(apply_T_star(x) - lambda * x - y), 1e-11 * (1.0 + norm_l2(y)));
    }
    // resonant right-hand sides: the source itself solves the homogeneous equation
    auto const m = momentum();
    double const lm = 2.0;
    auto const ym = DomainElement::atom(m, 0, 1.0, 0, I * lm);
    auto const xm = particular_solution(ym, lm);
    EXPECT_LT(norm_l2(apply_T_star(xm) - cplx(lm) * xm - ym), 1e-12);

    auto const s = schrodinger();
    auto const ys = DomainElement::atom(s, 0, 1.0, 1, 3.0 * I); // t e^{3 i t}, lambda = 9
    auto const xs = particular_solution(ys, 9.0);
    EXPECT_LT(norm_l2(apply_T_star(xs) - cplx(9.0) * xs - ys), 1e-11);
    auto const y0 = DomainElement::atom(s, 0, 1.0, 0, 0.0); // constant, lambda = 0
    auto const x0 = particular_solution(y0, 0.0);
    EXPECT_LT(norm_l2(apply_T_star(x0) - y0), 1e-13);
}

// Property: (x, y) = conj (y, x) and linearity of combine.
TEST(Property, InnerProductHermitian) {
    Rng rng(30);
    auto const m = build_direct_sum(2);
    for (int trial = 0; trial < 10; ++trial) {
        auto const x = random_element(m, rng), y = random_element(m, rng);
        EXPECT_LT(std::abs(inner_l2(x, y) - std::conj(inner_l2(y, x))), 1e-12 * (1.0 + std::abs(inner_l2(x, y))));
        EXPECT_GE(inner_l2(x, x).real(), 0.0);
    }
}
