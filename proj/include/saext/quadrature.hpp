#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "errors.hpp"

namespace saext {

/// Composite Gauss-Legendre rule on [0, length].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t order = 0;  // nodes per panel
    std::size_t panels = 0;
    double length = 0.0;

    /// Highest polynomial degree integrated exactly.
    std::size_t exact_degree() const { return 2 * order - 1; }
};

namespace detail {

struct GaussLegendre {
    std::vector<double> x; // on [-1, 1], ascending
    std::vector<double> w;
};

/// Newton iteration on P_n with the three-term recurrence.
inline GaussLegendre compute_gauss_legendre(std::size_t n) {
    GaussLegendre g;
    g.x.assign(n, 0.0);
    g.w.assign(n, 0.0);
    double const pi_ = 3.14159265358979323846;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi_ * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                double const p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            double const dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = z;
        for (std::size_t k = 2; k <= n; ++k) {
            double const p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
        double const w = 2.0 / ((1.0 - z * z) * dp * dp);
        g.x[i] = -z;
        g.x[n - 1 - i] = z;
        g.w[i] = w;
        g.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.x[n / 2] = 0.0;
    return g;
}

inline GaussLegendre const& gauss_legendre_cached(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<GaussLegendre const>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre const>(compute_gauss_legendre(n));
    return *slot;
}

} // namespace detail

/// `panels` equal panels of an `order`-point Gauss-Legendre rule on [0, length].
inline QuadratureRule gauss_legendre(double length, std::size_t order, std::size_t panels = 1) {
    if (!(length > 0.0)) throw ConfigError("gauss_legendre: interval length must be positive");
    if (order == 0 || panels == 0) throw ConfigError("gauss_legendre: order and panel count must be positive");
    auto const& g = detail::gauss_legendre_cached(order);
    QuadratureRule r;
    r.order = order;
    r.panels = panels;
    r.length = length;
    r.nodes.reserve(order * panels);
    r.weights.reserve(order * panels);
    double const h = length / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        double const a = h * static_cast<double>(p);
        for (std::size_t i = 0; i < order; ++i) {
            r.nodes.push_back(a + 0.5 * h * (g.x[i] + 1.0));
            r.weights.push_back(0.5 * h * g.w[i]);
        }
    }
    return r;
}

/// Process-wide nodes per panel used by inner products when no order is given.
inline std::atomic<std::size_t>& quadrature_order_setting() {
    static std::atomic<std::size_t> order{64};
    return order;
}

inline std::size_t default_quadrature_order() { return quadrature_order_setting().load(); }

inline void set_default_quadrature_order(std::size_t order) {
    if (order < 8) throw ConfigError("quadrature order must be at least 8");
    quadrature_order_setting().store(order);
}

/// Rule adequate for an entire integrand ~ t^degree e^{c t} with |c| <= rate on [0, length]:
/// `order_per_unit` nodes per unit length, refined so every panel sees |c| h <= 0.75 * order_per_unit (48 at 64 nodes).
inline QuadratureRule adaptive_rule(double length, double rate, std::size_t degree, std::size_t order_per_unit = 0) {
    if (order_per_unit == 0) order_per_unit = default_quadrature_order();
    auto panels = static_cast<std::size_t>(std::ceil(length - 1e-12));
    panels = std::max<std::size_t>(panels, 1);
    panels = std::max(panels, static_cast<std::size_t>(std::ceil(rate * length / (0.75 * static_cast<double>(order_per_unit)))));
    panels = std::max(panels, static_cast<std::size_t>(std::ceil(static_cast<double>(degree) / static_cast<double>(order_per_unit))));
    return gauss_legendre(length, order_per_unit, panels);
}

} // namespace saext
