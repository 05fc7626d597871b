#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace saext {

/// Seeded generator with a portable stream of doubles (mt19937_64 raw bits,
/// Box-Muller normals), so seeded experiments reproduce across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double const u2 = uniform();
        double const r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

    cplx complex_normal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

    ComplexVector complex_vector(Eigen::Index n) {
        ComplexVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
        return v;
    }

    ComplexMatrix ginibre(Eigen::Index n) {
        ComplexMatrix a(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) a(i, j) = complex_normal();
        return a;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Random Hermitian matrix (GUE shape) rescaled to spectral norm `norm`.
inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n, double norm) {
    ComplexMatrix const g = rng.ginibre(n);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    double const s = norm2(h);
    if (s > 0.0) h *= norm / s;
    return h;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phase of diag(R) removed.
inline ComplexMatrix haar_unitary(Rng& rng, Eigen::Index n) {
    ComplexMatrix const g = rng.ginibre(n);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    ComplexMatrix const r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        cplx const d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

} // namespace saext
