#include "stokes_bdf/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace stokes_bdf {

GaussRule1D gauss_legendre(int n)
{
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: n must be positive");
    }
    GaussRule1D rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Legendre P_n and its derivative by the three-term recurrence.
    auto legendre = [n](double x) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double dp = legendre(x).second;
        const auto idx = static_cast<std::size_t>(i);
        rule.points[idx] = 0.5 * (1.0 - x);
        rule.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule triangle_rule(int degree)
{
    if (degree < 0) {
        throw std::invalid_argument("triangle_rule: negative degree");
    }
    // Integrand of total degree d has degree d+1 in the collapsed direction.
    const int n = (degree + 3) / 2;
    const auto g = gauss_legendre(n);
    QuadratureRule rule;
    rule.degree = degree;
    for (std::size_t a = 0; a < g.points.size(); ++a) {
        const double u = g.points[a];
        for (std::size_t b = 0; b < g.points.size(); ++b) {
            const double x = u;
            const double y = g.points[b] * (1.0 - u);
            rule.barycentric.push_back({1.0 - x - y, x, y});
            rule.weights.push_back(g.weights[a] * g.weights[b] * (1.0 - u));
        }
    }
    return rule;
}

} // namespace stokes_bdf
