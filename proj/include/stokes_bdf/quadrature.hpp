#pragma once

#include <array>
#include <vector>

namespace stokes_bdf {

struct GaussRule1D {
    std::vector<double> points;  ///< on [0, 1]
    std::vector<double> weights; ///< sum to 1
};

GaussRule1D gauss_legendre(int n);

/// Rule on the reference triangle (0,0), (1,0), (0,1).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> barycentric; ///< (1 - x - y, x, y)
    std::vector<double> weights;                    ///< sum to 1/2

    [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Collapsed (Duffy) tensor Gauss rule, exact for total degree <= `degree`.
QuadratureRule triangle_rule(int degree);

} // namespace stokes_bdf
