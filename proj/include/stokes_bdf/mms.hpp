#pragma once

#include "stokes_bdf/types.hpp"

#include <string>

namespace stokes_bdf {

/// Exact (u, p) with analytic derivatives; f = du/dt - nu lap u + grad p.
struct ManufacturedCase {
    std::string name;
    VectorField u;
    VectorField du_dt;
    VectorField laplace_u;
    GradientField grad_u;
    ScalarField p;
    VectorField grad_p;

    [[nodiscard]] Vec2 forcing(Point x, double t, double nu) const;

    // spatial slices at fixed t
    [[nodiscard]] std::function<Vec2(Point)> velocity_at(double t) const;
    [[nodiscard]] std::function<Mat2(Point)> velocity_gradient_at(double t) const;
    [[nodiscard]] std::function<double(Point)> pressure_at(double t) const;
    [[nodiscard]] std::function<Vec2(Point)> forcing_at(double t, double nu) const;
};

/// g(t) = 1 + 5t + exp(-10t) + sin t, or g = 1 when `steady_g1`.
ManufacturedCase paper_case(bool steady_g1 = false);

/// u = t^m (y, -x), p = t^m (x + y - 1); exactly representable in space.
ManufacturedCase space_exact_case(int m);

/// f = 0 with zero exact fields, for homogeneous-data runs.
ManufacturedCase homogeneous_case();

/// `paper`, `paper-steady-g1` or `space-exact:<m>`.
ManufacturedCase case_by_name(const std::string& name);

} // namespace stokes_bdf
