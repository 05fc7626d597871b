#include <gtest/gtest.h>

#include <saext/quadrature.hpp>
#include <saext/random.hpp>
#include <saext/weyl.hpp>

using namespace saext;

namespace {

ModelOperator momentum(double l = 1.0) { return build_model(ModelKind::momentum, {l}); }
ModelOperator schrodinger() { return build_model(ModelKind::schrodinger, {1.0}); }

DomainElement random_element(ModelOperator const& m, Rng& rng) {
    std::vector<TermList> b(m.blocks());
    for (auto& terms : b)
        for (int j = 0; j < 3; ++j)
            terms.push_back({rng.complex_normal(), j % 2, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-5.0, 5.0))});
    return DomainElement(m, std::move(b));
}

// RK4 for f'' = -lambda f on [0, 1]; returns (f(1), f'(1)).
std::pair<cplx, cplx> rk4(cplx lambda, cplx f0, cplx d0, int steps = 4000) {
    double const h = 1.0 / steps;
    cplx f = f0, d = d0;
    for (int i = 0; i < steps; ++i) {
        cplx const k1f = d, k1d = -lambda * f;
        cplx const k2f = d + 0.5 * h * k1d, k2d = -lambda * (f + 0.5 * h * k1f);
        cplx const k3f = d + 0.5 * h * k2d, k3d = -lambda * (f + 0.5 * h * k2f);
        cplx const k4f = d + h * k3d, k4d = -lambda * (f + h * k3f);
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return {f, d};
}

// Weyl matrix of the standard Schrodinger triplet from shooting.
ComplexMatrix shooting_M(cplx lambda) {
    auto const [y1, d1] = rk4(lambda, 1.0, 0.0);
    auto const [y2, d2] = rk4(lambda, 0.0, 1.0);
    ComplexMatrix m(2, 2);
    cplx const b = -y1 / y2; // f = y1 + b y2: f(0) = 1, f(1) = 0
    m(0, 0) = b;
    m(1, 0) = -(d1 + b * d2);
    cplx const a = 1.0 / y2; // f = a y2: f(0) = 0, f(1) = 1
    m(0, 1) = a;
    m(1, 1) = -a * d2;
    return m;
}

// Antiperiodic resolvent of -i d/dt on [0, l] by the variation-of-constants formula.
cplx antiperiodic_resolvent(DomainElement const& y, cplx lambda, double l, double t) {
    auto integral = [&](double upper) {
        if (upper == 0.0) return cplx{};
        auto const q = gauss_legendre(upper, 64, 4);
        cplx s = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::exp(-I * lambda * q.nodes[i]) * y(0, q.nodes[i]);
        return s;
    };
    cplx const e = std::exp(I * lambda * l);
    cplx const c = -e * integral(l) / (1.0 + e);
    return I * std::exp(I * lambda * t) * (integral(t) + c);
}

} // namespace

TEST(Weyl, MomentumClosedForm) {
    for (double l : {1.0, 0.5}) {
        auto const tr = standard_triplet(momentum(l));
        for (cplx lambda : {I, cplx(0.25, 0.5), cplx(3.0, 0.1), cplx(-2.0, -1.0)}) {
            auto const w = weyl_M(tr, lambda);
            EXPECT_LT(std::abs(w.M(0, 0) - std::tan(lambda * l / 2.0)), 1e-12) << lambda;
        }
    }
    auto const w = weyl_M(standard_triplet(momentum()), I);
    EXPECT_NEAR(w.M(0, 0).imag(), std::tanh(0.5), 1e-14);
    EXPECT_EQ(w.branch, Branch::none);
}

TEST(Weyl, SchrodingerAgainstShooting) {
    auto const tr = standard_triplet(schrodinger());
    for (cplx lambda : {I, cplx(0.0, 0.25), cplx(1.0, 1.0), cplx(20.0, 4.0), cplx(-3.0, 0.5)}) {
        auto const w = weyl_M(tr, lambda);
        EXPECT_LT((w.M - shooting_M(lambda)).norm(), 1e-9 * (1.0 + w.M.norm())) << lambda;
        EXPECT_EQ(w.branch, Branch::principal_sqrt);
    }
}

TEST(Weyl, RegularizedBlocksAreNormalizedAtI) {
    auto const tr = regularized_direct_sum_triplet(build_direct_sum(6));
    auto const w = weyl_M(tr, I);
    EXPECT_LT((w.M - I * ComplexMatrix::Identity(6, 6)).norm(), 1e-12);
    EXPECT_LT(w.B.norm(), 1e-12);
}

TEST(Weyl, SpectrumHitNamesTheBlock) {
    EXPECT_THROW(weyl_M(standard_triplet(momentum()), pi), SpectrumHit);
    try {
        weyl_M(standard_triplet(build_direct_sum(3)), 2.0 * pi);
        FAIL() << "expected SpectrumHit";
    } catch (SpectrumHit const& e) {
        EXPECT_EQ(e.block(), 1u);
    }
}

TEST(Weyl, DerivativeIdentityAndOrder) {
    for (auto const& tr : {standard_triplet(momentum()), standard_triplet(schrodinger())}) {
        for (cplx lambda : {I, cplx(1.0, 1.0)}) {
            auto const d1 = weyl_derivative_check(tr, lambda, 1e-2 * std::abs(lambda));
            auto const d2 = weyl_derivative_check(tr, lambda, 0.5e-2 * std::abs(lambda));
            EXPECT_LT(weyl_derivative_check(tr, lambda).residual, 1e-6);
            double const order = std::log2(d1.residual / d2.residual);
            EXPECT_GT(order, 1.8);
            EXPECT_LT(order, 2.2);
        }
    }
    // M'(i) for momentum: (l/2) sec^2(i l/2) = 1 / (2 cosh^2(1/2))
    auto const d = weyl_derivative_check(standard_triplet(momentum()), I);
    EXPECT_NEAR(d.gram(0, 0).real(), 0.5 / std::pow(std::cosh(0.5), 2), 1e-12);
    EXPECT_THROW(weyl_derivative_check(standard_triplet(momentum()), 1.0), ContractError);
}

TEST(Weyl, CayleyTransform) {
    auto const b = cayley_B(standard_triplet(momentum()), I);
    EXPECT_NEAR(b.B(0, 0).real(), -std::exp(-1.0), 1e-12);
    EXPECT_NEAR(b.B(0, 0).imag(), 0.0, 1e-12);
    EXPECT_LT(b.route_residual, 1e-12);
    for (auto const& tr : {standard_triplet(schrodinger()), regularized_direct_sum_triplet(build_direct_sum(5))})
        for (cplx lambda : {cplx(0.0, 0.25), cplx(1.0, 1.0), cplx(0.0, 4.0)}) EXPECT_LT(cayley_B(tr, lambda).norm, 1.0);
    EXPECT_THROW(cayley_B(standard_triplet(momentum()), -I), ContractError);
}

TEST(Weyl, ResolventOfTPlus) {
    Rng rng(1);
    for (auto const& tr : {standard_triplet(momentum()), standard_triplet(schrodinger())}) {
        auto const y = random_element(tr.model, rng);
        for (cplx lambda : {I, cplx(2.0, 0.3)}) {
            auto const r = resolvent_T_plus(tr, lambda, y);
            EXPECT_LT(r.equation_residual, 1e-10);
            EXPECT_LT(r.boundary_residual, 1e-10);
            EXPECT_LE(r.norm_ratio, 1.0 + 1e-12);
            auto const a = gamma_minus_adjoint(tr, lambda, y);
            EXPECT_LT(a.residual, 1e-10);
        }
    }
}

TEST(Krein, AgainstVariationOfConstants) {
    Rng rng(2);
    auto const tr = standard_triplet(momentum());
    auto const ext = extension_from_unitary(tr, ComplexMatrix::Identity(1, 1));
    auto const y = random_element(tr.model, rng);
    for (cplx lambda : {I, cplx(0.5, 2.0)}) {
        auto const p = krein_residual(ext, lambda, y);
        EXPECT_LT(p.residual, 1e-10);
        for (double t : {0.0, 0.37, 0.81, 1.0}) {
            cplx const ref = antiperiodic_resolvent(y, lambda, 1.0, t);
            EXPECT_LT(std::abs(p.lhs(0, t) - ref), 1e-10 * (1.0 + std::abs(ref)));
            EXPECT_LT(std::abs(p.rhs(0, t) - ref), 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(Krein, GenericUnitaries) {
    Rng rng(3);
    for (auto const& tr : {standard_triplet(schrodinger()), regularized_direct_sum_triplet(build_direct_sum(4))}) {
        ComplexMatrix const u = haar_unitary(rng, static_cast<Eigen::Index>(tr.m()));
        auto const ext = extension_from_unitary(tr, u);
        auto const y = random_element(tr.model, rng);
        for (cplx lambda : {I, cplx(0.0, 2.0), cplx(1.0, 1.0)}) {
            auto const p = krein_residual(ext, lambda, y);
            EXPECT_LT(p.residual, 1e-8);
            EXPECT_LT(p.lhs_equation_residual, 1e-10);
            EXPECT_LT(p.lhs_membership_residual, 1e-10);
        }
    }
}

TEST(Krein, AnnihilationOnRangeOfT) {
    // y = (T - lambda) x with x in D(T) must satisfy gamma_-(conj lambda)^* y = 0
    for (auto const& tr : {standard_triplet(momentum()), standard_triplet(schrodinger()),
                           regularized_direct_sum_triplet(build_direct_sum(3))}) {
        auto const dt = domain_basis(tr.model, 4).elements;
        for (cplx lambda : {I, cplx(0.5, 2.0)}) {
            for (auto const& x : dt) {
                auto const y = apply_T_star(x) - lambda * x;
                auto const a = gamma_minus_adjoint(tr, lambda, y);
                EXPECT_LT(a.value.norm() / norm_l2(y), 1e-10);
            }
        }
    }
}

TEST(Krein, DomainDecomposition) {
    Rng rng(4);
    auto const tr = standard_triplet(schrodinger());
    ComplexMatrix const u = haar_unitary(rng, 2);
    auto const ext = extension_from_unitary(tr, u);
    // an element of D(T_U): random deficiency combination corrected by the boundary condition
    auto const k = deficiency_basis(tr.model, 2.0 * I);
    auto const dt = domain_basis(tr.model, 3).elements;
    std::vector<DomainElement> pool = k;
    auto const k2 = deficiency_basis(tr.model, cplx(1.0, -1.0));
    pool.insert(pool.end(), k2.begin(), k2.end());
    ComplexMatrix const e = ext.condition * boundary_matrix(pool);
    auto const ns = nullspace(e);
    ASSERT_EQ(ns.basis.cols(), 2);
    auto const x = combine(pool, ns.basis.col(0)) + dt[1];
    EXPECT_LT(ext.membership_residual(x), 1e-12);
    for (cplx lambda : {I, cplx(1.0, 3.0)}) {
        auto const d = domain_decompose(ext, lambda, x);
        EXPECT_LT(d.linkage_residual, 1e-8);
        EXPECT_LT(d.reassembly_residual, 1e-10);
        EXPECT_LT(d.range_residual, 1e-8);
    }
    EXPECT_THROW(domain_decompose(ext, I, k[0]), ContractError);
}

// Property: conjugate symmetry and the Nevanlinna sign on random points of both half-planes.
TEST(Property, WeylNevanlinna) {
    Rng rng(5);
    for (auto const& tr : {standard_triplet(momentum()), standard_triplet(schrodinger()),
                           regularized_direct_sum_triplet(build_direct_sum(4))}) {
        for (int i = 0; i < 10; ++i) {
            cplx const lambda(rng.uniform(-10.0, 10.0), rng.uniform(0.05, 5.0) * (i % 2 ? 1.0 : -1.0));
            auto const w = weyl_M(tr, lambda);
            EXPECT_LT(w.conj_symmetry_residual, 1e-10);
            EXPECT_GT(w.nevanlinna_min, 0.0);
        }
    }
}
